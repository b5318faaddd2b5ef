//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/fragment.hpp"

#include <algorithm>
#include <queue>
#include <vector>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"

namespace egd {

namespace {

std::vector<std::vector<int>> adjacency(int n, const std::vector<Bond> &bonds) {
  std::vector<std::vector<int>> adj(n);
  for (const auto &[i, j] : bonds) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto &nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

/// Backtracking maximizer over connected partial embeddings. `mapping[f]` is
/// the molecule atom assigned to fragment atom f, or -1.
struct ContainmentSearch {
  const std::vector<std::vector<int>> &frag_adj;
  const std::vector<int> &frag_types;
  const std::vector<std::vector<int>> &mol_adj;
  const std::vector<int> &mol_types;
  std::vector<int> mapping;
  std::vector<bool> mol_used;
  int best = 0;

  bool consistent(int f, int m) const {
    if (frag_types[f] != mol_types[m]) return false;
    for (int fn : frag_adj[f]) {
      const int img = mapping[fn];
      if (img < 0) continue;
      if (!std::binary_search(mol_adj[m].begin(), mol_adj[m].end(), img)) {
        return false;
      }
    }
    return true;
  }

  void grow(int matched) {
    best = std::max(best, matched);
    if (best == static_cast<int>(frag_types.size())) return;

    // Frontier: unmapped fragment atoms adjacent to the mapped set, keeping
    // the embedding connected.
    for (std::size_t f = 0; f < frag_adj.size(); ++f) {
      if (mapping[f] >= 0) continue;
      bool adjacent_to_mapped = false;
      for (int fn : frag_adj[f]) {
        if (mapping[fn] >= 0) {
          adjacent_to_mapped = true;
          break;
        }
      }
      if (!adjacent_to_mapped) continue;
      for (std::size_t m = 0; m < mol_adj.size(); ++m) {
        if (mol_used[m] || !consistent(static_cast<int>(f),
                                       static_cast<int>(m))) {
          continue;
        }
        mapping[f] = static_cast<int>(m);
        mol_used[m] = true;
        grow(matched + 1);
        mol_used[m] = false;
        mapping[f] = -1;
        if (best == static_cast<int>(frag_types.size())) return;
      }
    }
  }
};

}  // namespace

Fragment extract_fragment_bfs(const Molecule &mol, int start, int size,
                              const TypeRules &rules) {
  const int n = mol.atoms();
  if (start < 0 || start >= n) throw Error("extract_fragment_bfs: bad start");
  if (size < 1 || size > n) throw Error("extract_fragment_bfs: bad size");

  const auto adj = adjacency(n, mol.bonds);
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  std::queue<int> queue;
  queue.push(start);
  seen[start] = true;
  while (!queue.empty() && static_cast<int>(order.size()) < size) {
    const int u = queue.front();
    queue.pop();
    order.push_back(u);
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push(v);
      }
    }
  }
  if (static_cast<int>(order.size()) < size) {
    throw Error("extract_fragment_bfs: connected component smaller than size");
  }

  Eigen::MatrixXd pos(size, 3);
  std::vector<int> types(size);
  for (int k = 0; k < size; ++k) {
    pos.row(k) = mol.positions.row(order[k]);
    types[k] = mol.types[order[k]];
  }
  Fragment frag;
  frag.molecule = Molecule(std::move(pos), std::move(types), rules);
  frag.is_template = true;
  if (!frag.molecule.connected()) {
    throw Error("extract_fragment_bfs: extracted fragment not connected");
  }
  return frag;
}

double containment_ratio(const Molecule &mol, const Fragment &frag) {
  const int fn = frag.atoms();
  if (fn > 12) {
    throw ConfigError("containment_ratio: fragments above 12 atoms are "
                      "rejected (exact matching regime)");
  }
  bool type_present = false;
  for (int t : frag.molecule.types) {
    if (std::find(mol.types.begin(), mol.types.end(), t) != mol.types.end()) {
      type_present = true;
      break;
    }
  }
  if (!type_present) return 0.0;

  const auto frag_adj = adjacency(fn, frag.molecule.bonds);
  const auto mol_adj = adjacency(mol.atoms(), mol.bonds);

  ContainmentSearch search{frag_adj, frag.molecule.types, mol_adj, mol.types,
                           std::vector<int>(fn, -1),
                           std::vector<bool>(mol.atoms(), false), 0};

  // Seed every (fragment atom, molecule atom) type-consistent pair; the
  // recursion only grows connected embeddings from there.
  for (int f = 0; f < fn; ++f) {
    for (int m = 0; m < mol.atoms(); ++m) {
      if (frag.molecule.types[f] != mol.types[m]) continue;
      search.mapping[f] = m;
      search.mol_used[m] = true;
      search.grow(1);
      search.mol_used[m] = false;
      search.mapping[f] = -1;
      if (search.best == fn) break;
    }
    if (search.best == fn) break;
  }
  return static_cast<double>(search.best) / static_cast<double>(fn);
}

nlohmann::json Fragment::to_json() const {
  nlohmann::json j = molecule.to_json();
  j["is_template"] = is_template;
  return j;
}

Fragment Fragment::from_json(const nlohmann::json &j, const TypeRules &rules) {
  Fragment frag;
  frag.molecule = Molecule::from_json(j, rules);
  frag.is_template = j.value("is_template", true);
  return frag;
}

}  // namespace egd
