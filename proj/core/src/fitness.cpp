//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egd/error.hpp"

namespace egd {

double target_error(const std::vector<double> &values,
                    const std::vector<double> &targets, ErrorNorm norm) {
  if (values.size() != targets.size()) {
    throw Error("target_error: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double diff = values[i] - targets[i];
    total += norm == ErrorNorm::kAbs ? std::abs(diff) : diff * diff;
  }
  return total;
}

double constraint_violation(const std::vector<double> &g_values,
                            const std::vector<double> &h_values) {
  double total = 0.0;
  for (double g : g_values) total += std::max(0.0, g);
  for (double h : h_values) total += std::abs(h);
  return total;
}

double penalized_fitness(double mae, double cv, double mae_max) {
  if (mae < 0.0 || cv < 0.0 || mae_max < 0.0) {
    throw Error("penalized_fitness: negative input");
  }
  return cv == 0.0 ? mae : mae + mae_max;
}

bool dominates_constrained(const FitnessRecord &a, const FitnessRecord &b) {
  if (a.objectives.size() != b.objectives.size()) {
    throw Error("dominates_constrained: objective dimension mismatch");
  }
  if (a.feasible && !b.feasible) return true;
  if (!a.feasible) return false;
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.objectives.size(); ++i) {
    if (a.objectives[i] > b.objectives[i]) return false;
    if (a.objectives[i] < b.objectives[i]) strictly_better = true;
  }
  return strictly_better;
}

std::vector<std::size_t> pareto_front(
    const std::vector<FitnessRecord> &records) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < records.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (j != i && dominates_constrained(records[j], records[i])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

std::vector<double> normalize_objectives(
    const std::vector<double> &values,
    const std::vector<std::pair<double, double>> &bounds) {
  if (values.size() != bounds.size()) {
    throw Error("normalize_objectives: bounds dimension mismatch");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double span = bounds[i].second - bounds[i].first;
    out[i] = (values[i] - bounds[i].first) / (span > 0.0 ? span : 1.0);
  }
  return out;
}

Spea2Assignment spea2_assign(
    const std::vector<FitnessRecord> &records, int k_density,
    const std::optional<std::vector<std::pair<double, double>>> &bounds) {
  const std::size_t n = records.size();
  Spea2Assignment out;
  if (n == 0) return out;
  if (k_density < 1) throw Error("spea2_assign: k_density must be >= 1");

  out.k_used = k_density;
  if (k_density >= static_cast<int>(n)) {
    out.k_used = static_cast<int>(n) - 1;
    out.k_clamped = true;
  }

  std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, false));
  out.strength.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dominates_constrained(records[i], records[j])) {
        dom[i][j] = true;
        ++out.strength[i];
      }
    }
  }
  out.raw.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dom[j][i]) out.raw[i] += out.strength[j];
    }
  }

  std::vector<std::vector<double>> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = bounds ? normalize_objectives(records[i].objectives, *bounds)
                       : records[i].objectives;
  }

  out.sigma_k.assign(n, 0.0);
  out.density.assign(n, 0.0);
  out.fitness.assign(n, 0.0);
  std::vector<double> dists;
  for (std::size_t i = 0; i < n; ++i) {
    dists.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double sq = 0.0;
      for (std::size_t c = 0; c < points[i].size(); ++c) {
        const double diff = points[i][c] - points[j][c];
        sq += diff * diff;
      }
      dists.push_back(std::sqrt(sq));
    }
    double sigma = 0.0;
    if (out.k_used >= 1 && !dists.empty()) {
      std::nth_element(dists.begin(), dists.begin() + (out.k_used - 1),
                       dists.end());
      sigma = dists[static_cast<std::size_t>(out.k_used - 1)];
    }
    out.sigma_k[i] = sigma;
    out.density[i] = 1.0 / (sigma + 2.0);
    out.fitness[i] = out.raw[i] + out.density[i];
  }
  return out;
}

double hypervolume_2d(const std::vector<std::array<double, 2>> &points,
                      const std::array<double, 2> &ref) {
  std::vector<std::array<double, 2>> kept;
  for (const auto &p : points) {
    if (p[0] < ref[0] && p[1] < ref[1]) kept.push_back(p);
  }
  if (kept.empty()) return 0.0;

  // Non-dominated filter (minimization), then sweep in x.
  std::vector<std::array<double, 2>> front;
  for (const auto &p : kept) {
    bool dominated = false;
    for (const auto &q : kept) {
      if ((q[0] < p[0] && q[1] <= p[1]) || (q[0] <= p[0] && q[1] < p[1])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(p);
  }
  std::sort(front.begin(), front.end());
  front.erase(std::unique(front.begin(), front.end()), front.end());

  double volume = 0.0;
  for (std::size_t i = 0; i < front.size(); ++i) {
    const double next_x = i + 1 < front.size() ? front[i + 1][0] : ref[0];
    volume += (next_x - front[i][0]) * (ref[1] - front[i][1]);
  }
  return volume;
}

double cliffs_delta(const std::vector<double> &xs,
                    const std::vector<double> &ys) {
  if (xs.empty() || ys.empty()) throw Error("cliffs_delta: empty sample");
  long long greater = 0;
  long long less = 0;
  for (double x : xs) {
    for (double y : ys) {
      if (x > y) ++greater;
      if (x < y) ++less;
    }
  }
  return static_cast<double>(greater - less) /
         (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

}  // namespace egd
