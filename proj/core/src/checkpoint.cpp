//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/checkpoint.hpp"

#include <cstdint>
#include <sstream>

#include <nlohmann/json.hpp>

namespace egd {

nlohmann::json checkpoint_to_json(const Checkpoint &checkpoint) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &row : checkpoint.rows) {
    rows.push_back({{"generation", row.generation},
                    {"metric", row.metric},
                    {"value", row.value}});
  }
  nlohmann::json population = nlohmann::json::array();
  for (const auto &ind : checkpoint.population) {
    population.push_back({{"state", ind.state.to_json()},
                          {"fitness", ind.fitness.to_json()},
                          {"birth_generation", ind.birth_generation}});
  }
  nlohmann::json front = nlohmann::json::array();
  for (const auto &rec : checkpoint.best_front) front.push_back(rec.to_json());

  return {{"schema", 1},
          {"config_hash", checkpoint.config_hash},
          {"generation", checkpoint.generation},
          {"seed", checkpoint.seed},
          {"reverse_steps", checkpoint.accounting.reverse_steps},
          {"evaluations", checkpoint.accounting.evaluations},
          {"rows", rows},
          {"population", population},
          {"best_front", front}};
}

Checkpoint checkpoint_from_json(const nlohmann::json &j,
                                const TypeRules &rules) {
  Checkpoint ck;
  ck.config_hash = j.at("config_hash").get<std::string>();
  ck.generation = j.at("generation").get<int>();
  ck.seed = j.at("seed").get<std::uint64_t>();
  ck.accounting.reverse_steps = j.at("reverse_steps").get<std::uint64_t>();
  ck.accounting.evaluations = j.at("evaluations").get<std::uint64_t>();
  for (const auto &row : j.at("rows")) {
    ck.rows.push_back({row.at("generation").get<int>(),
                       row.at("metric").get<std::string>(),
                       row.at("value").get<double>()});
  }
  for (const auto &entry : j.at("population")) {
    Individual ind;
    ind.state = StateTensor::from_json(entry.at("state"));
    ind.molecule = decode(ind.state, rules);
    ind.fitness = FitnessRecord::from_json(entry.at("fitness"));
    ind.birth_generation = entry.at("birth_generation").get<int>();
    ck.population.push_back(std::move(ind));
  }
  for (const auto &rec : j.at("best_front")) {
    ck.best_front.push_back(FitnessRecord::from_json(rec));
  }
  return ck;
}

std::string config_hash(const nlohmann::json &resolved_config) {
  const std::string dump = resolved_config.dump();
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

}  // namespace egd
