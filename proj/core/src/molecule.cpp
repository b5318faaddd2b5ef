//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/molecule.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"

namespace egd {

TypeRules::TypeRules(int num_types, double default_min, double default_max,
                     int default_min_degree, int default_max_degree)
    : num_types_(num_types) {
  if (num_types < 1) throw ConfigError("TypeRules: need at least one type");
  if (!(default_min < default_max)) {
    throw ConfigError("TypeRules: bond window needs min < max");
  }
  bond_.assign(static_cast<std::size_t>(num_types) * num_types,
               {default_min, default_max});
  valence_.assign(num_types, {default_min_degree, default_max_degree});
}

TypeRules TypeRules::standard() {
  TypeRules rules(3, 0.8, 1.7, 1, 4);
  rules.set_bond_window(0, 0, 0.9, 1.7);
  rules.set_bond_window(0, 1, 0.8, 1.6);
  rules.set_bond_window(0, 2, 0.9, 1.6);
  rules.set_bond_window(1, 1, 0.8, 1.5);
  rules.set_bond_window(1, 2, 0.85, 1.55);
  rules.set_bond_window(2, 2, 1.0, 1.8);
  rules.set_valence_window(0, 1, 4);
  rules.set_valence_window(1, 1, 3);
  rules.set_valence_window(2, 1, 2);
  return rules;
}

void TypeRules::set_bond_window(int a, int b, double min_dist,
                                double max_dist) {
  if (a < 0 || a >= num_types_ || b < 0 || b >= num_types_) {
    throw ConfigError("TypeRules: type index out of range");
  }
  if (!(min_dist < max_dist)) {
    throw ConfigError("TypeRules: bond window needs min < max");
  }
  bond_[static_cast<std::size_t>(a) * num_types_ + b] = {min_dist, max_dist};
  bond_[static_cast<std::size_t>(b) * num_types_ + a] = {min_dist, max_dist};
}

void TypeRules::set_valence_window(int type, int min_degree, int max_degree) {
  if (type < 0 || type >= num_types_) {
    throw ConfigError("TypeRules: type index out of range");
  }
  if (min_degree > max_degree || min_degree < 0) {
    throw ConfigError("TypeRules: invalid valence window");
  }
  valence_[type] = {min_degree, max_degree};
}

std::pair<double, double> TypeRules::bond_window(int a, int b) const {
  if (a < 0 || a >= num_types_ || b < 0 || b >= num_types_) {
    throw ConfigError("TypeRules: no bond window for type pair (" +
                      std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return bond_[static_cast<std::size_t>(a) * num_types_ + b];
}

std::pair<int, int> TypeRules::valence_window(int type) const {
  if (type < 0 || type >= num_types_) {
    throw ConfigError("TypeRules: no valence window for type " +
                      std::to_string(type));
  }
  return valence_[type];
}

nlohmann::json TypeRules::to_json() const {
  nlohmann::json bonds = nlohmann::json::array();
  for (int a = 0; a < num_types_; ++a) {
    for (int b = a; b < num_types_; ++b) {
      const auto [lo, hi] = bond_window(a, b);
      bonds.push_back({{"a", a}, {"b", b}, {"min", lo}, {"max", hi}});
    }
  }
  nlohmann::json valences = nlohmann::json::array();
  for (int t = 0; t < num_types_; ++t) {
    valences.push_back({{"type", t},
                        {"min_degree", valence_[t].first},
                        {"max_degree", valence_[t].second}});
  }
  return {{"num_types", num_types_}, {"bonds", bonds}, {"valences", valences}};
}

TypeRules TypeRules::from_json(const nlohmann::json &j) {
  TypeRules rules(j.at("num_types").get<int>(), 0.5, 2.0, 0, 8);
  for (const auto &b : j.at("bonds")) {
    rules.set_bond_window(b.at("a"), b.at("b"), b.at("min"), b.at("max"));
  }
  for (const auto &v : j.at("valences")) {
    rules.set_valence_window(v.at("type"), v.at("min_degree"),
                             v.at("max_degree"));
  }
  return rules;
}

std::vector<Bond> infer_bonds(const Eigen::MatrixXd &positions,
                              const std::vector<int> &types,
                              const TypeRules &rules) {
  if (!positions.allFinite()) throw Error("infer_bonds: non-finite positions");
  const int n = static_cast<int>(positions.rows());
  std::vector<Bond> bonds;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dist = (positions.row(i) - positions.row(j)).norm();
      const auto [lo, hi] = rules.bond_window(types[i], types[j]);
      if (dist >= lo && dist < hi) bonds.emplace_back(i, j);
    }
  }
  return bonds;
}

Molecule::Molecule(Eigen::MatrixXd pos, std::vector<int> ts,
                   const TypeRules &rules)
    : positions(std::move(pos)), types(std::move(ts)) {
  if (positions.rows() < 1) throw Error("Molecule: needs at least one atom");
  if (static_cast<int>(types.size()) != positions.rows()) {
    throw Error("Molecule: types/positions length mismatch");
  }
  if (!positions.allFinite()) throw Error("Molecule: non-finite positions");
  positions.rowwise() -= positions.colwise().mean().eval();
  bonds = infer_bonds(positions, types, rules);
}

std::vector<int> Molecule::degrees() const {
  std::vector<int> deg(atoms(), 0);
  for (const auto &[i, j] : bonds) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

bool Molecule::connected() const {
  const int n = atoms();
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto &[i, j] : bonds) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

Molecule decode(const StateTensor &state, const TypeRules &rules) {
  if (state.t != 0) throw Error("decode: state must be clean (t = 0)");
  if (!state.is_finite()) throw Error("decode: non-finite entries");
  const int n = state.atoms();
  const int d = state.feat_dim();
  std::vector<int> types(n, 0);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int k = 1; k < d; ++k) {
      if (state.feats(i, k) > state.feats(i, best)) best = k;
    }
    types[i] = best;
  }
  return Molecule(state.coords, std::move(types), rules);
}

StateTensor encode(const Molecule &mol, int num_types) {
  StateTensor s;
  s.coords = mol.positions;
  s.feats = Eigen::MatrixXd::Zero(mol.atoms(), num_types);
  for (int i = 0; i < mol.atoms(); ++i) {
    if (mol.types[i] < 0 || mol.types[i] >= num_types) {
      throw Error("encode: type index out of range");
    }
    s.feats(i, mol.types[i]) = 1.0;
  }
  s.t = 0;
  return s;
}

ValidityReport check_validity(const Molecule &mol, const TypeRules &rules) {
  ValidityReport report;
  const auto deg = mol.degrees();
  int stable = 0;
  for (int i = 0; i < mol.atoms(); ++i) {
    const auto [lo, hi] = rules.valence_window(mol.types[i]);
    if (deg[i] >= lo && deg[i] <= hi) ++stable;
  }
  report.atom_stable_fraction =
      static_cast<double>(stable) / static_cast<double>(mol.atoms());
  report.molecule_stable = stable == mol.atoms();
  report.valid = report.molecule_stable && mol.connected();
  return report;
}

nlohmann::json Molecule::to_json() const {
  nlohmann::json pos = nlohmann::json::array();
  for (int i = 0; i < atoms(); ++i) {
    pos.push_back({positions(i, 0), positions(i, 1), positions(i, 2)});
  }
  return {{"positions", pos}, {"types", types}};
}

Molecule Molecule::from_json(const nlohmann::json &j, const TypeRules &rules) {
  const auto &pos = j.at("positions");
  Eigen::MatrixXd p(static_cast<Eigen::Index>(pos.size()), 3);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (int c = 0; c < 3; ++c) p(i, c) = pos.at(i).at(c).get<double>();
  }
  return Molecule(std::move(p), j.at("types").get<std::vector<int>>(), rules);
}

std::string element_symbol(int type) {
  static const std::array<const char *, 8> kSymbols = {"C", "N", "O", "H",
                                                       "F", "S", "P", "B"};
  return kSymbols[static_cast<std::size_t>(type) % kSymbols.size()];
}

std::string Molecule::to_xyz(const std::string &comment) const {
  std::ostringstream out;
  out << atoms() << "\n" << comment << "\n";
  for (int i = 0; i < atoms(); ++i) {
    out << element_symbol(types[i]) << " " << positions(i, 0) << " "
        << positions(i, 1) << " " << positions(i, 2) << "\n";
  }
  return out.str();
}

}  // namespace egd
