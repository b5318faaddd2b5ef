//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/properties.hpp"

#include <cmath>

#include "egd/error.hpp"

namespace egd {

namespace {

bool parse_type_fraction(const std::string &id, int &type_out) {
  constexpr const char *kPrefix = "type_fraction:";
  if (id.rfind(kPrefix, 0) != 0) return false;
  const std::string suffix = id.substr(std::string(kPrefix).size());
  if (suffix.empty()) return false;
  for (char c : suffix) {
    if (c < '0' || c > '9') return false;
  }
  type_out = std::stoi(suffix);
  return true;
}

}  // namespace

double type_charge(int type) {
  const double magnitude = std::pow(2.0, -static_cast<double>(type / 2));
  return (type % 2 == 0) ? magnitude : -magnitude;
}

bool property_known(const std::string &id) {
  int k = 0;
  return id == "atom_count" || id == "radius_of_gyration" ||
         id == "typed_moment" || id == "pairwise_energy" ||
         parse_type_fraction(id, k);
}

double evaluate_property(const Molecule &mol, const std::string &id) {
  const int n = mol.atoms();
  if (id == "atom_count") return static_cast<double>(n);
  if (id == "radius_of_gyration") {
    return std::sqrt(mol.positions.squaredNorm() / n);
  }
  if (id == "typed_moment") {
    Eigen::RowVector3d moment = Eigen::RowVector3d::Zero();
    for (int i = 0; i < n; ++i) {
      moment += type_charge(mol.types[i]) * mol.positions.row(i);
    }
    return moment.norm();
  }
  if (id == "pairwise_energy") {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        total += 1.0 / (1.0 + (mol.positions.row(i) - mol.positions.row(j))
                                  .squaredNorm());
      }
    }
    return total;
  }
  int k = 0;
  if (parse_type_fraction(id, k)) {
    int count = 0;
    for (int t : mol.types) count += t == k ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(n);
  }
  throw ConfigError("evaluate_property: unknown property id '" + id + "'");
}

std::vector<std::string> registered_properties() {
  return {"atom_count", "radius_of_gyration", "typed_moment",
          "type_fraction:0", "pairwise_energy"};
}

}  // namespace egd
