//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/schedule.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"

namespace egd {

namespace {

void check_bounds(int steps, double beta_min, double beta_max) {
  if (steps < 1) throw ConfigError("schedule: T must be >= 1");
  if (!(beta_min > 0.0 && beta_min < 1.0) ||
      !(beta_max > 0.0 && beta_max < 1.0)) {
    throw ConfigError("schedule: rate bounds must lie inside (0, 1)");
  }
  if (beta_min > beta_max) {
    throw ConfigError("schedule: beta_min must not exceed beta_max");
  }
}

}  // namespace

ScheduleKind schedule_kind_from_string(const std::string &name) {
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "linear") return ScheduleKind::kLinear;
  if (name == "cosine") return ScheduleKind::kCosine;
  throw ConfigError("schedule: unknown kind '" + name + "'");
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kLinear: return "linear";
    case ScheduleKind::kCosine: return "cosine";
  }
  return "?";
}

NoiseSchedule::NoiseSchedule(ScheduleKind kind, std::vector<double> beta,
                             double bmin, double bmax)
    : kind_(kind), beta_min_(bmin), beta_max_(bmax), beta_(std::move(beta)) {
  alpha_.resize(beta_.size());
  alpha_bar_.resize(beta_.size());
  double prod = 1.0;
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    alpha_[i] = 1.0 - beta_[i];
    prod *= alpha_[i];
    alpha_bar_[i] = prod;
  }
}

int NoiseSchedule::check(int t) const {
  if (t < 1 || t > steps()) {
    throw Error("schedule: step index " + std::to_string(t) +
                " outside [1, " + std::to_string(steps()) + "]");
  }
  return t;
}

NoiseSchedule NoiseSchedule::constant(int steps, double beta) {
  check_bounds(steps, beta, beta);
  return NoiseSchedule(ScheduleKind::kConstant,
                       std::vector<double>(steps, beta), beta, beta);
}

NoiseSchedule NoiseSchedule::linear(int steps, double beta_start,
                                    double beta_end) {
  check_bounds(steps, std::min(beta_start, beta_end),
               std::max(beta_start, beta_end));
  std::vector<double> beta(steps);
  for (int t = 0; t < steps; ++t) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(t) / (steps - 1);
    beta[t] = beta_start + (beta_end - beta_start) * frac;
  }
  return NoiseSchedule(ScheduleKind::kLinear, std::move(beta), beta_start,
                       beta_end);
}

NoiseSchedule NoiseSchedule::cosine(int steps, double beta_min,
                                    double beta_max) {
  check_bounds(steps, beta_min, beta_max);
  constexpr double kOffset = 0.008;
  constexpr double kPi = 3.14159265358979323846;
  auto curve = [&](double t) {
    const double x = (t / steps + kOffset) / (1.0 + kOffset) * kPi / 2.0;
    return std::cos(x) * std::cos(x);
  };
  const double f0 = curve(0.0);
  std::vector<double> beta(steps);
  double prev = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double bar = curve(static_cast<double>(t)) / f0;
    beta[t - 1] = std::clamp(1.0 - bar / prev, beta_min, beta_max);
    prev *= 1.0 - beta[t - 1];
  }
  return NoiseSchedule(ScheduleKind::kCosine, std::move(beta), beta_min,
                       beta_max);
}

NoiseSchedule build_schedule(ScheduleKind kind, int steps, double beta_min,
                             double beta_max) {
  switch (kind) {
    case ScheduleKind::kConstant:
      if (beta_min != beta_max) {
        throw ConfigError("schedule: constant kind needs beta_min == beta_max");
      }
      return NoiseSchedule::constant(steps, beta_min);
    case ScheduleKind::kLinear:
      return NoiseSchedule::linear(steps, beta_min, beta_max);
    case ScheduleKind::kCosine:
      return NoiseSchedule::cosine(steps, beta_min, beta_max);
  }
  throw ConfigError("schedule: unknown kind");
}

nlohmann::json NoiseSchedule::to_json() const {
  return nlohmann::json{{"kind", to_string(kind_)},
                        {"T", steps()},
                        {"beta_min", beta_min_},
                        {"beta_max", beta_max_}};
}

NoiseSchedule NoiseSchedule::from_json(const nlohmann::json &j) {
  return build_schedule(schedule_kind_from_string(j.at("kind")),
                        j.at("T").get<int>(), j.at("beta_min").get<double>(),
                        j.at("beta_max").get<double>());
}

}  // namespace egd
