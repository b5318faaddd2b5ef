//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_CONFIG_HPP
#define EGD_CONFIG_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egd/bench.hpp"

namespace egd {

/// Fully resolved experiment description: every default materialized into
/// `resolved` (byte-deterministic dump), plus the ready-to-run context.
struct LoadedConfig {
  nlohmann::json resolved;
  TaskContext context;
  std::string task;
  std::vector<std::uint64_t> seeds;
  std::string baseline;  // equal_evals | equal_runtime | none
  std::vector<int> sweep_grid;
  int sweep_samples = 100;
  std::vector<int> sweep_parent_indices;
};

/// Parses and validates a config document. Unknown keys are rejected; ledger
/// defaults are filled in and echoed. Throws ConfigError on any violation.
/// `seed_override`, when >= 0, replaces the config seed.
LoadedConfig resolve_config(const nlohmann::json &input,
                            long long seed_override = -1);

ExperimentSpec experiment_spec(const LoadedConfig &config);

}  // namespace egd

#endif  // EGD_CONFIG_HPP
