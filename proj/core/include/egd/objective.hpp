//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_OBJECTIVE_HPP
#define EGD_OBJECTIVE_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "egd/fragment.hpp"
#include "egd/molecule.hpp"

namespace egd {

enum class ObjectiveMode { kTarget, kMinimize };
enum class ErrorNorm { kAbs, kSquared };

struct ObjectiveEntry {
  std::string property;
  std::optional<double> target;  // required in target mode
  double weight = 1.0;
};

enum class ConstraintKind {
  kPropertyMax,   // inequality: value <= bound, g = value - bound
  kPropertyMin,   // inequality: value >= bound, g = bound - value
  kValidity,      // inequality: g = -1 if valid else +1
  kPropertyEq,    // equality:   h = value - bound
  kContainment,   // equality:   h = bound - containment_ratio (bound = 1)
};

struct ConstraintSpec {
  ConstraintKind kind;
  std::string property;  // unused for kValidity/kContainment
  double bound = 0.0;
};

struct ObjectiveSpec {
  ObjectiveMode mode = ObjectiveMode::kTarget;
  ErrorNorm norm = ErrorNorm::kAbs;
  std::vector<ObjectiveEntry> entries;
  std::vector<ConstraintSpec> inequalities;
  std::vector<ConstraintSpec> equalities;

  void validate() const;
  bool has_containment() const;

  nlohmann::json to_json() const;
  static ObjectiveSpec from_json(const nlohmann::json &j);
};

/// Scores for one individual. `objectives` holds the raw property values of
/// the spec entries; `mae` the (weighted) target error in target mode;
/// `scalar_fitness` / `spea2_fitness` are assigned per evaluation set.
struct FitnessRecord {
  std::vector<double> objectives;
  double cv = 0.0;
  double mae = 0.0;
  double scalar_fitness = 0.0;
  double spea2_fitness = 0.0;
  bool feasible = true;

  nlohmann::json to_json() const;
  static FitnessRecord from_json(const nlohmann::json &j);
};

/// Evaluates objectives and constraints for a decoded molecule. The fragment
/// is required when a containment constraint is present.
FitnessRecord evaluate_objective(const ObjectiveSpec &spec, const Molecule &mol,
                                 const TypeRules &rules,
                                 const Fragment *fragment);

}  // namespace egd

#endif  // EGD_OBJECTIVE_HPP
