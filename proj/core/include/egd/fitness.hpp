//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_FITNESS_HPP
#define EGD_FITNESS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "egd/objective.hpp"

namespace egd {

/// Sum of per-entry errors against targets: abs -> sum |v - o| (the reported
/// MAE), squared -> sum (v - o)^2.
double target_error(const std::vector<double> &values,
                    const std::vector<double> &targets, ErrorNorm norm);

/// CV = sum max(0, g_i) + sum |h_j|; zero means feasible.
double constraint_violation(const std::vector<double> &g_values,
                            const std::vector<double> &h_values);

/// mae if cv == 0, else mae + mae_max, with mae_max the maximum error over
/// the current evaluation set.
double penalized_fitness(double mae, double cv, double mae_max);

/// Feasibility-first Pareto dominance. Two infeasible records never dominate
/// each other.
bool dominates_constrained(const FitnessRecord &a, const FitnessRecord &b);

/// Maximal constraint-non-dominated subset, input order preserved.
std::vector<std::size_t> pareto_front(const std::vector<FitnessRecord> &records);

struct Spea2Assignment {
  std::vector<int> strength;       // S
  std::vector<double> raw;         // R
  std::vector<double> sigma_k;     // distance to k-th nearest other record
  std::vector<double> density;     // D = 1 / (sigma_k + 2)
  std::vector<double> fitness;     // F = R + D
  int k_used = 0;
  bool k_clamped = false;
};

/// SPEA2 fitness over an evaluation set. Distances are Euclidean in objective
/// space; when bounds are given, each dimension is first normalized by them.
Spea2Assignment spea2_assign(
    const std::vector<FitnessRecord> &records, int k_density,
    const std::optional<std::vector<std::pair<double, double>>> &bounds = {});

/// Exact 2-D hypervolume (minimization). Points with any coordinate >= ref
/// are clipped out; empty input gives 0.
double hypervolume_2d(const std::vector<std::array<double, 2>> &points,
                      const std::array<double, 2> &ref);

/// (#{x > y} - #{x < y}) / (|xs| |ys|), in [-1, 1].
double cliffs_delta(const std::vector<double> &xs,
                    const std::vector<double> &ys);

/// Normalizes an objective vector by per-dimension (min, max) bounds.
std::vector<double> normalize_objectives(
    const std::vector<double> &values,
    const std::vector<std::pair<double, double>> &bounds);

}  // namespace egd

#endif  // EGD_FITNESS_HPP
