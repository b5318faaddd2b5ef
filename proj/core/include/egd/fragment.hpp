//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_FRAGMENT_HPP
#define EGD_FRAGMENT_HPP

#include <nlohmann/json_fwd.hpp>

#include "egd/molecule.hpp"

namespace egd {

/// A molecule marked as a constraint template. The bond graph is connected.
struct Fragment {
  Molecule molecule;
  bool is_template = true;

  int atoms() const { return molecule.atoms(); }

  nlohmann::json to_json() const;
  static Fragment from_json(const nlohmann::json &j, const TypeRules &rules);
};

/// First `size` atoms in BFS order from `start` (neighbors visited in
/// ascending index), re-centered, with induced bonds. Errors if the BFS
/// component is smaller than `size`.
Fragment extract_fragment_bfs(const Molecule &mol, int start, int size,
                              const TypeRules &rules);

/// Largest connected, type-consistent partial embedding of the fragment into
/// the molecule's bond graph (every fragment bond between mapped atoms must
/// map to a molecule bond; geometry is not compared), divided by the fragment
/// atom count. Exact search; fragments above 12 atoms are rejected.
double containment_ratio(const Molecule &mol, const Fragment &frag);

}  // namespace egd

#endif  // EGD_FRAGMENT_HPP
