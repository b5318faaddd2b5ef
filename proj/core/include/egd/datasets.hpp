//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_DATASETS_HPP
#define EGD_DATASETS_HPP

#include <cstdint>
#include <vector>

#include "egd/molecule.hpp"
#include "egd/state.hpp"

namespace egd {

/// Family-structured reference set: `families` random valid tree molecules,
/// each with `variants` small-jitter copies that keep the bond topology.
/// Atom counts cycle through [atoms_min, atoms_max] so every size in the
/// range is covered.
struct FamilyDatasetParams {
  int families = 256;
  int variants = 8;
  int atoms_min = 5;
  int atoms_max = 7;
  double jitter = 0.06;
  std::uint64_t seed = 9001;
};

std::vector<Molecule> make_family_dataset(const FamilyDatasetParams &params,
                                          const TypeRules &rules);

/// Reference set for the noise-crossover sweep: four valid 8-atom single-type
/// shapes with scrambled row correspondence, plus the six pairwise
/// row-averages (all invalid). Row-mask crossover products of two shapes lie
/// closer to their pair average than to either parent, which is what makes
/// low-t_add offspring denoise onto invalid modes.
struct SweepReference {
  std::vector<Molecule> molecules;   // 10 entries, valid first
  std::vector<int> valid_indices;    // indices of the 4 valid shapes
};

TypeRules sweep_rules();
SweepReference make_sweep_reference();

std::vector<StateTensor> encode_dataset(const std::vector<Molecule> &molecules,
                                        int num_types);

nlohmann::json dataset_to_json(const std::vector<Molecule> &molecules);
std::vector<Molecule> dataset_from_json(const nlohmann::json &j,
                                        const TypeRules &rules);

}  // namespace egd

#endif  // EGD_DATASETS_HPP
