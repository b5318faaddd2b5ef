//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_SCHEDULE_HPP
#define EGD_SCHEDULE_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace egd {

enum class ScheduleKind { kConstant, kLinear, kCosine };

ScheduleKind schedule_kind_from_string(const std::string &name);
std::string to_string(ScheduleKind kind);

/// Per-step noise rates beta_t with the derived alpha_t = 1 - beta_t and
/// alpha_bar_t = prod_{s<=t} alpha_s. Steps are indexed t = 1..T; accessors
/// accept t = 0 for the empty-product conventions alpha_bar(0) = 1.
class NoiseSchedule {
public:
  static NoiseSchedule constant(int steps, double beta);
  static NoiseSchedule linear(int steps, double beta_start, double beta_end);
  // Squared-cosine alpha_bar curve; derived betas are clamped into
  // [beta_min, beta_max].
  static NoiseSchedule cosine(int steps, double beta_min, double beta_max);

  int steps() const { return static_cast<int>(beta_.size()); }

  double beta(int t) const { return beta_.at(check(t) - 1); }
  double alpha(int t) const { return alpha_.at(check(t) - 1); }
  double alpha_bar(int t) const {
    return t == 0 ? 1.0 : alpha_bar_.at(check(t) - 1);
  }

  const std::vector<double> &betas() const { return beta_; }
  const std::vector<double> &alpha_bars() const { return alpha_bar_; }

  ScheduleKind kind() const { return kind_; }
  double beta_min() const { return beta_min_; }
  double beta_max() const { return beta_max_; }

  nlohmann::json to_json() const;
  static NoiseSchedule from_json(const nlohmann::json &j);

private:
  NoiseSchedule(ScheduleKind kind, std::vector<double> beta, double bmin,
                double bmax);

  int check(int t) const;

  ScheduleKind kind_;
  double beta_min_ = 0;
  double beta_max_ = 0;
  std::vector<double> beta_;
  std::vector<double> alpha_;
  std::vector<double> alpha_bar_;
};

/// Factory used by config parsing; validates T >= 1 and bounds in (0, 1).
NoiseSchedule build_schedule(ScheduleKind kind, int steps, double beta_min,
                             double beta_max);

}  // namespace egd

#endif  // EGD_SCHEDULE_HPP
