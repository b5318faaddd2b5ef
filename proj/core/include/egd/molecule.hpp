//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_MOLECULE_HPP
#define EGD_MOLECULE_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "egd/state.hpp"

namespace egd {

using Bond = std::pair<int, int>;  // i < j

/// Surrogate chemistry: per-type-pair bond-length windows (closed at min,
/// open at max) and per-type valence windows (inclusive degree range).
class TypeRules {
public:
  TypeRules(int num_types, double default_min, double default_max,
            int default_min_degree, int default_max_degree);

  static TypeRules standard();  // the 3-type rules used by the shipped tasks

  int num_types() const { return num_types_; }

  void set_bond_window(int type_a, int type_b, double min_dist,
                       double max_dist);
  void set_valence_window(int type, int min_degree, int max_degree);

  std::pair<double, double> bond_window(int type_a, int type_b) const;
  std::pair<int, int> valence_window(int type) const;

  nlohmann::json to_json() const;
  static TypeRules from_json(const nlohmann::json &j);

private:
  int num_types_;
  std::vector<std::pair<double, double>> bond_;     // num_types^2
  std::vector<std::pair<int, int>> valence_;        // num_types
};

/// Decoded typed point cloud. Positions are centered on construction and the
/// bond set is derived from (positions, types) via infer_bonds.
struct Molecule {
  Eigen::MatrixXd positions;  // n x 3, CoM zero
  std::vector<int> types;     // n, in [0, num_types)
  std::vector<Bond> bonds;    // sorted, i < j

  Molecule() = default;
  Molecule(Eigen::MatrixXd pos, std::vector<int> ts, const TypeRules &rules);

  int atoms() const { return static_cast<int>(positions.rows()); }
  std::vector<int> degrees() const;
  bool connected() const;

  nlohmann::json to_json() const;
  static Molecule from_json(const nlohmann::json &j, const TypeRules &rules);

  /// XYZ text: element symbol per type index, one atom per line.
  std::string to_xyz(const std::string &comment = "") const;
};

struct ValidityReport {
  double atom_stable_fraction = 0.0;  // AS analog
  bool molecule_stable = false;       // MS analog
  bool valid = false;                 // MS and connected
};

/// Pair (i, j) bonded iff |x_i - x_j| in [min, max) for their type window.
std::vector<Bond> infer_bonds(const Eigen::MatrixXd &positions,
                              const std::vector<int> &types,
                              const TypeRules &rules);

/// Argmax feature decode (ties to the lowest type index), centered positions,
/// derived bonds. Requires a clean (t = 0), finite state.
Molecule decode(const StateTensor &state, const TypeRules &rules);

/// One-hot encode back to a clean StateTensor.
StateTensor encode(const Molecule &mol, int num_types);

ValidityReport check_validity(const Molecule &mol, const TypeRules &rules);

/// Element symbol palette used for XYZ export.
std::string element_symbol(int type);

}  // namespace egd

#endif  // EGD_MOLECULE_HPP
