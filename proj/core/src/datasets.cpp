//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/datasets.hpp"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"
#include "egd/rng.hpp"

namespace egd {

namespace {

Eigen::RowVector3d random_unit(Rng &rng) {
  Eigen::RowVector3d v;
  do {
    v << rng.gaussian(), rng.gaussian(), rng.gaussian();
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

/// Grows a random tree molecule whose only bonds are the tree edges: every
/// non-bonded pair is kept at distance >= clearance, so degrees equal tree
/// degrees and validity reduces to the valence caps honored during growth.
Molecule grow_tree_molecule(int atoms, const TypeRules &rules, Rng &rng) {
  const double clearance = 1.95;
  for (int attempt = 0; attempt < 200; ++attempt) {
    Eigen::MatrixXd pos(atoms, 3);
    std::vector<int> types(atoms);
    std::vector<int> degree(atoms, 0);

    types[0] = rng.uniform_int(0, rules.num_types() - 1);
    pos.row(0).setZero();

    bool failed = false;
    for (int i = 1; i < atoms && !failed; ++i) {
      bool placed = false;
      for (int trial = 0; trial < 120 && !placed; ++trial) {
        const int parent = rng.uniform_int(0, i - 1);
        if (degree[parent] >=
            rules.valence_window(types[parent]).second) {
          continue;
        }
        const int type = rng.uniform_int(0, rules.num_types() - 1);
        const auto [lo, hi] = rules.bond_window(types[parent], type);
        const double margin = 0.12 * (hi - lo);
        const double length = rng.uniform(lo + margin, hi - margin);
        const Eigen::RowVector3d candidate =
            pos.row(parent) + length * random_unit(rng);

        bool clear = true;
        for (int j = 0; j < i && clear; ++j) {
          if (j == parent) continue;
          clear = (candidate - pos.row(j)).norm() >= clearance;
        }
        if (!clear) continue;

        pos.row(i) = candidate;
        types[i] = type;
        ++degree[parent];
        ++degree[i];
        placed = true;
      }
      failed = !placed;
    }
    if (failed) continue;

    Molecule mol(pos, types, rules);
    if (check_validity(mol, rules).valid) return mol;
  }
  throw Error("grow_tree_molecule: could not generate a valid molecule");
}

Molecule jitter_variant(const Molecule &base, double jitter,
                        const TypeRules &rules, Rng &rng) {
  for (int attempt = 0; attempt < 80; ++attempt) {
    Eigen::MatrixXd pos = base.positions;
    for (int i = 0; i < base.atoms(); ++i) {
      for (int c = 0; c < 3; ++c) pos(i, c) += jitter * rng.gaussian();
    }
    Molecule variant(pos, base.types, rules);
    if (variant.bonds == base.bonds &&
        check_validity(variant, rules).valid) {
      return variant;
    }
  }
  return base;
}

Eigen::Matrix3d axis_rotation(double angle, int axis) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  const int a = (axis + 1) % 3;
  const int b = (axis + 2) % 3;
  rot(a, a) = c;
  rot(a, b) = -s;
  rot(b, a) = s;
  rot(b, b) = c;
  return rot;
}

}  // namespace

std::vector<Molecule> make_family_dataset(const FamilyDatasetParams &params,
                                          const TypeRules &rules) {
  if (params.families < 1 || params.variants < 1) {
    throw ConfigError("dataset: families and variants must be >= 1");
  }
  if (params.atoms_min < 2 || params.atoms_min > params.atoms_max) {
    throw ConfigError("dataset: need 2 <= atoms_min <= atoms_max");
  }
  std::vector<Molecule> dataset;
  dataset.reserve(static_cast<std::size_t>(params.families) * params.variants);
  const int span = params.atoms_max - params.atoms_min + 1;
  for (int f = 0; f < params.families; ++f) {
    Rng rng = derive_rng(params.seed,
                         {static_cast<std::uint64_t>(StreamPhase::kDataset),
                          static_cast<std::uint64_t>(f)});
    const int atoms = params.atoms_min + f % span;
    const Molecule base = grow_tree_molecule(atoms, rules, rng);
    dataset.push_back(base);
    for (int v = 1; v < params.variants; ++v) {
      dataset.push_back(jitter_variant(base, params.jitter, rules, rng));
    }
  }
  return dataset;
}

TypeRules sweep_rules() {
  TypeRules rules(1, 0.9, 1.7, 1, 2);
  return rules;
}

SweepReference make_sweep_reference() {
  const TypeRules rules = sweep_rules();
  const int n = 8;
  const double bond = 1.3;

  auto chain_shape = [&](double bend, double twist) {
    Eigen::MatrixXd pos(n, 3);
    pos.row(0).setZero();
    Eigen::RowVector3d dir(1.0, 0.0, 0.0);
    for (int i = 1; i < n; ++i) {
      const Eigen::Matrix3d rot =
          axis_rotation(bend, 2) * axis_rotation(twist * i, 0);
      dir = (rot * dir.transpose()).transpose();
      dir /= dir.norm();
      pos.row(i) = pos.row(i - 1) + bond * dir;
    }
    return pos;
  };

  // Regular octagon ring; second-neighbor chords stay above the bond window.
  auto ring_shape = [&]() {
    Eigen::MatrixXd pos(n, 3);
    const double radius = bond / (2.0 * std::sin(3.14159265358979323846 / n));
    for (int i = 0; i < n; ++i) {
      const double angle = 2.0 * 3.14159265358979323846 * i / n;
      pos.row(i) << radius * std::cos(angle), radius * std::sin(angle), 0.0;
    }
    return pos;
  };

  auto permute_rows = [&](const Eigen::MatrixXd &pos,
                          const std::vector<int> &perm) {
    Eigen::MatrixXd out(pos.rows(), 3);
    for (int i = 0; i < pos.rows(); ++i) out.row(i) = pos.row(perm[i]);
    return out;
  };

  const std::vector<int> types(n, 0);
  std::vector<Eigen::MatrixXd> shapes;
  shapes.push_back(chain_shape(0.45, 0.0));                     // planar zigzag
  shapes.push_back(permute_rows(ring_shape(),                   // scrambled ring
                                {3, 6, 1, 4, 7, 2, 5, 0}));
  shapes.push_back(permute_rows(chain_shape(0.30, 0.9),         // twisted chain
                                {7, 0, 5, 2, 6, 1, 4, 3}));
  shapes.push_back(permute_rows(chain_shape(0.65, 0.70),        // coiled helix
                                {4, 2, 7, 0, 3, 6, 1, 5}));

  SweepReference ref;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    Molecule mol(shapes[s], types, rules);
    if (!check_validity(mol, rules).valid) {
      throw Error("make_sweep_reference: shape " + std::to_string(s) +
                  " is not valid");
    }
    ref.valid_indices.push_back(static_cast<int>(ref.molecules.size()));
    ref.molecules.push_back(std::move(mol));
  }
  for (std::size_t a = 0; a < shapes.size(); ++a) {
    for (std::size_t b = a + 1; b < shapes.size(); ++b) {
      Molecule avg(0.5 * (ref.molecules[a].positions +
                          ref.molecules[b].positions),
                   types, rules);
      if (check_validity(avg, rules).valid) {
        throw Error("make_sweep_reference: pair average (" +
                    std::to_string(a) + ", " + std::to_string(b) +
                    ") is unexpectedly valid");
      }
      ref.molecules.push_back(std::move(avg));
    }
  }
  return ref;
}

std::vector<StateTensor> encode_dataset(const std::vector<Molecule> &molecules,
                                        int num_types) {
  std::vector<StateTensor> states;
  states.reserve(molecules.size());
  for (const auto &mol : molecules) states.push_back(encode(mol, num_types));
  return states;
}

nlohmann::json dataset_to_json(const std::vector<Molecule> &molecules) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &mol : molecules) j.push_back(mol.to_json());
  return j;
}

std::vector<Molecule> dataset_from_json(const nlohmann::json &j,
                                        const TypeRules &rules) {
  std::vector<Molecule> out;
  for (const auto &entry : j) out.push_back(Molecule::from_json(entry, rules));
  return out;
}

}  // namespace egd
