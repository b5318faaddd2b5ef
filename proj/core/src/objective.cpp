//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/objective.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"
#include "egd/fitness.hpp"
#include "egd/properties.hpp"

namespace egd {

namespace {

std::string kind_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kPropertyMax: return "property_max";
    case ConstraintKind::kPropertyMin: return "property_min";
    case ConstraintKind::kValidity: return "validity";
    case ConstraintKind::kPropertyEq: return "property_eq";
    case ConstraintKind::kContainment: return "containment";
  }
  return "?";
}

ConstraintKind kind_from_name(const std::string &name) {
  if (name == "property_max") return ConstraintKind::kPropertyMax;
  if (name == "property_min") return ConstraintKind::kPropertyMin;
  if (name == "validity") return ConstraintKind::kValidity;
  if (name == "property_eq") return ConstraintKind::kPropertyEq;
  if (name == "containment") return ConstraintKind::kContainment;
  throw ConfigError("objective: unknown constraint kind '" + name + "'");
}

bool is_equality(ConstraintKind kind) {
  return kind == ConstraintKind::kPropertyEq ||
         kind == ConstraintKind::kContainment;
}

}  // namespace

void ObjectiveSpec::validate() const {
  if (entries.empty()) {
    throw ConfigError("objective: at least one objective entry required");
  }
  for (const auto &entry : entries) {
    if (!property_known(entry.property)) {
      throw ConfigError("objective: unknown property '" + entry.property + "'");
    }
    if (mode == ObjectiveMode::kTarget && !entry.target.has_value()) {
      throw ConfigError("objective: target mode entry '" + entry.property +
                        "' is missing a target value");
    }
  }
  for (const auto &c : inequalities) {
    if (is_equality(c.kind)) {
      throw ConfigError("objective: equality constraint listed as inequality");
    }
    if ((c.kind == ConstraintKind::kPropertyMax ||
         c.kind == ConstraintKind::kPropertyMin) &&
        !property_known(c.property)) {
      throw ConfigError("objective: unknown constraint property '" +
                        c.property + "'");
    }
  }
  for (const auto &c : equalities) {
    if (!is_equality(c.kind)) {
      throw ConfigError("objective: inequality constraint listed as equality");
    }
    if (c.kind == ConstraintKind::kPropertyEq && !property_known(c.property)) {
      throw ConfigError("objective: unknown constraint property '" +
                        c.property + "'");
    }
  }
}

bool ObjectiveSpec::has_containment() const {
  for (const auto &c : equalities) {
    if (c.kind == ConstraintKind::kContainment) return true;
  }
  return false;
}

FitnessRecord evaluate_objective(const ObjectiveSpec &spec, const Molecule &mol,
                                 const TypeRules &rules,
                                 const Fragment *fragment) {
  FitnessRecord rec;
  rec.objectives.reserve(spec.entries.size());
  double err = 0.0;
  for (const auto &entry : spec.entries) {
    const double value = evaluate_property(mol, entry.property);
    rec.objectives.push_back(value);
    if (spec.mode == ObjectiveMode::kTarget) {
      const double diff = value - *entry.target;
      err += entry.weight *
             (spec.norm == ErrorNorm::kAbs ? std::abs(diff) : diff * diff);
    }
  }
  rec.mae = spec.mode == ObjectiveMode::kTarget ? err : 0.0;

  std::vector<double> g_values;
  std::vector<double> h_values;
  for (const auto &c : spec.inequalities) {
    switch (c.kind) {
      case ConstraintKind::kPropertyMax:
        g_values.push_back(evaluate_property(mol, c.property) - c.bound);
        break;
      case ConstraintKind::kPropertyMin:
        g_values.push_back(c.bound - evaluate_property(mol, c.property));
        break;
      case ConstraintKind::kValidity:
        g_values.push_back(check_validity(mol, rules).valid ? -1.0 : 1.0);
        break;
      default:
        throw ConfigError("objective: bad inequality kind");
    }
  }
  for (const auto &c : spec.equalities) {
    switch (c.kind) {
      case ConstraintKind::kPropertyEq:
        h_values.push_back(evaluate_property(mol, c.property) - c.bound);
        break;
      case ConstraintKind::kContainment: {
        if (fragment == nullptr) {
          throw ConfigError(
              "objective: containment constraint needs a fragment");
        }
        h_values.push_back(c.bound - containment_ratio(mol, *fragment));
        break;
      }
      default:
        throw ConfigError("objective: bad equality kind");
    }
  }
  rec.cv = constraint_violation(g_values, h_values);
  rec.feasible = rec.cv == 0.0;
  return rec;
}

nlohmann::json ObjectiveSpec::to_json() const {
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto &entry : entries) {
    nlohmann::json e{{"property", entry.property}, {"weight", entry.weight}};
    if (entry.target) e["target"] = *entry.target;
    entries_json.push_back(std::move(e));
  }
  auto constraint_json = [](const ConstraintSpec &c) {
    return nlohmann::json{{"kind", kind_name(c.kind)},
                          {"property", c.property},
                          {"bound", c.bound}};
  };
  nlohmann::json ineq = nlohmann::json::array();
  for (const auto &c : inequalities) ineq.push_back(constraint_json(c));
  nlohmann::json eq = nlohmann::json::array();
  for (const auto &c : equalities) eq.push_back(constraint_json(c));
  return {{"mode", mode == ObjectiveMode::kTarget ? "target" : "minimize"},
          {"norm", norm == ErrorNorm::kAbs ? "abs" : "squared"},
          {"entries", entries_json},
          {"inequality", ineq},
          {"equality", eq}};
}

ObjectiveSpec ObjectiveSpec::from_json(const nlohmann::json &j) {
  ObjectiveSpec spec;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "target") {
    spec.mode = ObjectiveMode::kTarget;
  } else if (mode == "minimize") {
    spec.mode = ObjectiveMode::kMinimize;
  } else {
    throw ConfigError("objective: unknown mode '" + mode + "'");
  }
  const std::string norm = j.value("norm", std::string("abs"));
  if (norm == "abs") {
    spec.norm = ErrorNorm::kAbs;
  } else if (norm == "squared") {
    spec.norm = ErrorNorm::kSquared;
  } else {
    throw ConfigError("objective: unknown norm '" + norm + "'");
  }
  for (const auto &e : j.at("entries")) {
    ObjectiveEntry entry;
    entry.property = e.at("property").get<std::string>();
    if (e.contains("target")) entry.target = e.at("target").get<double>();
    entry.weight = e.value("weight", 1.0);
    spec.entries.push_back(std::move(entry));
  }
  auto parse_constraint = [](const nlohmann::json &c) {
    ConstraintSpec spec_c;
    spec_c.kind = kind_from_name(c.at("kind").get<std::string>());
    spec_c.property = c.value("property", std::string());
    spec_c.bound = c.value("bound", 0.0);
    return spec_c;
  };
  if (j.contains("inequality")) {
    for (const auto &c : j.at("inequality")) {
      spec.inequalities.push_back(parse_constraint(c));
    }
  }
  if (j.contains("equality")) {
    for (const auto &c : j.at("equality")) {
      spec.equalities.push_back(parse_constraint(c));
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json FitnessRecord::to_json() const {
  return {{"objectives", objectives}, {"cv", cv},
          {"mae", mae},               {"scalar_fitness", scalar_fitness},
          {"spea2_fitness", spea2_fitness}, {"feasible", feasible}};
}

FitnessRecord FitnessRecord::from_json(const nlohmann::json &j) {
  FitnessRecord rec;
  rec.objectives = j.at("objectives").get<std::vector<double>>();
  rec.cv = j.at("cv").get<double>();
  rec.mae = j.at("mae").get<double>();
  rec.scalar_fitness = j.at("scalar_fitness").get<double>();
  rec.spea2_fitness = j.at("spea2_fitness").get<double>();
  rec.feasible = j.at("feasible").get<bool>();
  return rec;
}

}  // namespace egd
