//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_PROPERTIES_HPP
#define EGD_PROPERTIES_HPP

#include <string>
#include <vector>

#include "egd/molecule.hpp"

namespace egd {

// Deterministic analytic evaluators over decoded molecules. All registered
// properties are invariant under rigid motions of the positions. Ids:
//   atom_count          n
//   radius_of_gyration  sqrt(sum |x_i|^2 / n)
//   typed_moment        |sum q(type_i) x_i| with fixed per-type charges
//   type_fraction:<k>   fraction of atoms with type k
//   pairwise_energy     sum_{i<j} 1 / (1 + |x_i - x_j|^2)

/// Fixed per-type charge used by typed_moment: alternating sign, halving
/// magnitude every two types (1, -1, 1/2, -1/2, 1/4, ...).
double type_charge(int type);

bool property_known(const std::string &id);

double evaluate_property(const Molecule &mol, const std::string &id);

/// Ids of the always-registered properties (type_fraction shown for k = 0).
std::vector<std::string> registered_properties();

}  // namespace egd

#endif  // EGD_PROPERTIES_HPP
