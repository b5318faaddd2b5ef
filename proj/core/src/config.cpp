//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/config.hpp"

#include <algorithm>
#include <set>

#include "egd/datasets.hpp"
#include "egd/error.hpp"
#include "egd/properties.hpp"

namespace egd {

namespace {

void check_keys(const nlohmann::json &j, const std::set<std::string> &allowed,
                const std::string &context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto &[key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

struct TaskDefaults {
  int population = 32;
  int iterations = 10;
  int t_add = 200;
  std::string schedule_kind = "linear";
  int schedule_steps = 1000;
  double beta_min = 1e-4;
  double beta_max = 0.02;
  std::string mode = "single";
  nlohmann::json objective;
  bool fragment = false;
  std::string dataset_kind = "families";
};

TaskDefaults defaults_for(const std::string &task) {
  TaskDefaults d;
  if (task == "T1") {
    d.objective = {{"mode", "target"},
                   {"norm", "abs"},
                   {"entries", {{{"property", "typed_moment"},
                                 {"target", 0.5},
                                 {"weight", 1.0}}}}};
  } else if (task == "T2") {
    d.objective = {{"mode", "target"},
                   {"norm", "abs"},
                   {"entries", {{{"property", "radius_of_gyration"},
                                 {"target", 1.35},
                                 {"weight", 1.0}},
                                {{"property", "typed_moment"},
                                 {"target", 0.5},
                                 {"weight", 1.0}}}}};
  } else if (task == "T3" || task == "T4") {
    d.mode = "multi";
    d.iterations = 20;
    d.objective = {{"mode", "minimize"},
                   {"norm", "abs"},
                   {"entries", {{{"property", "radius_of_gyration"},
                                 {"weight", 1.0}},
                                {{"property", "pairwise_energy"},
                                 {"weight", 1.0}}}}};
    if (task == "T4") {
      d.fragment = true;
      d.objective["equality"] = {{{"kind", "containment"},
                                  {"property", ""},
                                  {"bound", 1.0}}};
    }
  } else if (task == "sweep") {
    d.schedule_kind = "constant";
    d.schedule_steps = 1000;
    d.beta_min = 0.05;
    d.beta_max = 0.05;
    d.dataset_kind = "sweep";
    d.objective = {{"mode", "target"},
                   {"norm", "abs"},
                   {"entries", {{{"property", "radius_of_gyration"},
                                 {"target", 1.0},
                                 {"weight", 1.0}}}}};
  } else if (task == "custom") {
    d.objective = nullptr;
  } else {
    throw ConfigError("config: unknown task '" + task +
                      "' (expected T1, T2, T3, T4, sweep, or custom)");
  }
  return d;
}

std::vector<std::pair<double, double>> derive_bounds(
    const ObjectiveSpec &objective, const std::vector<Molecule> &dataset) {
  std::vector<std::pair<double, double>> bounds;
  for (const auto &entry : objective.entries) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto &mol : dataset) {
      const double v = evaluate_property(mol, entry.property);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo < hi)) hi = lo + 1.0;
    bounds.emplace_back(lo, hi);
  }
  return bounds;
}

}  // namespace

LoadedConfig resolve_config(const nlohmann::json &input,
                            long long seed_override) {
  check_keys(input,
             {"task", "seed", "seed_count", "baseline", "population",
              "iterations", "t_add", "k_tournament", "mode", "crossover",
              "init", "stochastic_denoise", "use_fragment_injection",
              "archive_size", "schedule", "dataset", "objective", "fragment",
              "objective_bounds", "sweep"},
             "config");
  if (!input.contains("task")) throw ConfigError("config: missing 'task'");

  const std::string task = input.at("task").get<std::string>();
  const TaskDefaults defaults = defaults_for(task);

  nlohmann::json resolved;
  resolved["task"] = task;

  const std::uint64_t seed =
      seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                         : input.value("seed", std::uint64_t{1});
  resolved["seed"] = seed;
  const int seed_count = input.value("seed_count", 20);
  if (seed_count < 1) throw ConfigError("config: seed_count must be >= 1");
  resolved["seed_count"] = seed_count;
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(seed_count));
  for (int i = 0; i < seed_count; ++i) seeds[i] = seed + i;

  const std::string baseline = input.value("baseline", std::string("none"));
  if (baseline != "none" && baseline != "equal_evals" &&
      baseline != "equal_runtime") {
    throw ConfigError("config: baseline must be none, equal_evals, or "
                      "equal_runtime");
  }
  resolved["baseline"] = baseline;

  // Schedule.
  nlohmann::json sched = input.value("schedule", nlohmann::json::object());
  check_keys(sched, {"kind", "T", "beta_min", "beta_max"}, "config.schedule");
  const std::string kind = sched.value("kind", defaults.schedule_kind);
  const int steps = sched.value("T", defaults.schedule_steps);
  const double beta_min = sched.value("beta_min", defaults.beta_min);
  const double beta_max = sched.value("beta_max", defaults.beta_max);
  NoiseSchedule schedule =
      build_schedule(schedule_kind_from_string(kind), steps, beta_min,
                     beta_max);
  resolved["schedule"] = schedule.to_json();

  // Dataset.
  nlohmann::json ds = input.value("dataset", nlohmann::json::object());
  check_keys(ds,
             {"kind", "families", "variants", "atoms_min", "atoms_max",
              "jitter", "seed"},
             "config.dataset");
  const std::string dataset_kind = ds.value("kind", defaults.dataset_kind);

  TypeRules rules = dataset_kind == "sweep" ? sweep_rules()
                                            : TypeRules::standard();
  std::vector<Molecule> dataset;
  std::vector<int> sweep_parents;
  if (dataset_kind == "families") {
    FamilyDatasetParams params;
    params.families = ds.value("families", 256);
    params.variants = ds.value("variants", 8);
    params.atoms_min = ds.value("atoms_min", 5);
    params.atoms_max = ds.value("atoms_max", 7);
    params.jitter = ds.value("jitter", 0.06);
    params.seed = ds.value("seed", std::uint64_t{9001});
    dataset = make_family_dataset(params, rules);
    resolved["dataset"] = {{"kind", "families"},
                           {"families", params.families},
                           {"variants", params.variants},
                           {"atoms_min", params.atoms_min},
                           {"atoms_max", params.atoms_max},
                           {"jitter", params.jitter},
                           {"seed", params.seed}};
  } else if (dataset_kind == "sweep") {
    SweepReference ref = make_sweep_reference();
    dataset = std::move(ref.molecules);
    sweep_parents = std::move(ref.valid_indices);
    resolved["dataset"] = {{"kind", "sweep"}};
  } else {
    throw ConfigError("config.dataset: unknown kind '" + dataset_kind + "'");
  }

  // Objective.
  nlohmann::json objective_json =
      input.contains("objective") ? input.at("objective") : defaults.objective;
  if (objective_json.is_null()) {
    throw ConfigError("config: task 'custom' requires an explicit objective");
  }
  check_keys(objective_json, {"mode", "norm", "entries", "inequality",
                              "equality"},
             "config.objective");
  ObjectiveSpec objective = ObjectiveSpec::from_json(objective_json);
  resolved["objective"] = objective.to_json();

  // Run parameters.
  RunConfig run;
  run.population_size = input.value("population", defaults.population);
  run.iterations = input.value("iterations", defaults.iterations);
  run.t_add = input.value("t_add", defaults.t_add);
  run.k_tournament = input.value("k_tournament", 2);
  const std::string mode = input.value("mode", defaults.mode);
  if (mode == "single") {
    run.mode = RunMode::kSingle;
  } else if (mode == "multi") {
    run.mode = RunMode::kMulti;
  } else {
    throw ConfigError("config: mode must be single or multi");
  }
  const std::string crossover =
      input.value("crossover", std::string("uniform_mask"));
  if (crossover == "uniform_mask") {
    run.crossover = CrossoverOp::kUniformMask;
  } else if (crossover == "blend") {
    run.crossover = CrossoverOp::kBlend;
  } else {
    throw ConfigError("config: crossover must be uniform_mask or blend");
  }
  const std::string init = input.value("init", std::string("denoise"));
  if (init == "denoise") {
    run.init = InitMode::kDenoise;
  } else if (init == "dataset") {
    run.init = InitMode::kDataset;
  } else {
    throw ConfigError("config: init must be denoise or dataset");
  }
  run.stochastic_denoise = input.value("stochastic_denoise", true);
  run.use_fragment_injection = input.value("use_fragment_injection", true);
  run.archive_size = input.value("archive_size", 0);
  run.seed = seed;
  run.objective = objective;

  resolved["population"] = run.population_size;
  resolved["iterations"] = run.iterations;
  resolved["t_add"] = run.t_add;
  resolved["k_tournament"] = run.k_tournament;
  resolved["mode"] = mode;
  resolved["crossover"] = crossover;
  resolved["init"] = init;
  resolved["stochastic_denoise"] = run.stochastic_denoise;
  resolved["use_fragment_injection"] = run.use_fragment_injection;
  resolved["archive_size"] =
      run.archive_size == 0 ? run.population_size : run.archive_size;

  // Fragment.
  const bool wants_fragment = input.contains("fragment")
                                  ? !input.at("fragment").is_null()
                                  : defaults.fragment;
  if (wants_fragment) {
    nlohmann::json frag = input.value("fragment", nlohmann::json::object());
    check_keys(frag, {"source", "molecule", "start", "size", "positions",
                      "types"},
               "config.fragment");
    const std::string source = frag.value("source", std::string("dataset"));
    Fragment fragment;
    if (source == "dataset") {
      const int molecule = frag.value("molecule", 0);
      const int start = frag.value("start", 0);
      const int size = frag.value("size", 3);
      if (molecule < 0 || molecule >= static_cast<int>(dataset.size())) {
        throw ConfigError("config.fragment: molecule index out of range");
      }
      fragment = extract_fragment_bfs(dataset[static_cast<std::size_t>(
                                          molecule)],
                                      start, size, rules);
      resolved["fragment"] = {{"source", "dataset"},
                              {"molecule", molecule},
                              {"start", start},
                              {"size", size}};
    } else if (source == "explicit") {
      fragment = Fragment::from_json(frag, rules);
      resolved["fragment"] = {{"source", "explicit"},
                              {"positions", frag.at("positions")},
                              {"types", frag.at("types")}};
    } else {
      throw ConfigError("config.fragment: source must be dataset or explicit");
    }
    run.fragment = std::move(fragment);
  } else {
    resolved["fragment"] = nullptr;
  }

  // Objective bounds (multi mode): explicit or derived from the dataset.
  if (run.mode == RunMode::kMulti) {
    if (input.contains("objective_bounds")) {
      const auto &ob = input.at("objective_bounds");
      for (const auto &entry : objective.entries) {
        if (!ob.contains(entry.property)) {
          throw ConfigError("config.objective_bounds: missing property '" +
                            entry.property + "'");
        }
        const auto &pair = ob.at(entry.property);
        run.objective_bounds.emplace_back(pair.at(0).get<double>(),
                                          pair.at(1).get<double>());
      }
    } else {
      run.objective_bounds = derive_bounds(objective, dataset);
    }
    nlohmann::json bounds_json;
    for (std::size_t i = 0; i < objective.entries.size(); ++i) {
      bounds_json[objective.entries[i].property] = {
          run.objective_bounds[i].first, run.objective_bounds[i].second};
    }
    resolved["objective_bounds"] = bounds_json;
  } else {
    resolved["objective_bounds"] = nullptr;
  }

  // Sweep parameters.
  nlohmann::json sweep = input.value("sweep", nlohmann::json::object());
  check_keys(sweep, {"grid", "samples_per_point"}, "config.sweep");
  std::vector<int> grid = sweep.value(
      "grid", std::vector<int>{25, 50, 100, 200, 400});
  const int samples = sweep.value("samples_per_point", 100);
  if (samples < 1) {
    throw ConfigError("config.sweep: samples_per_point must be >= 1");
  }
  if (task == "sweep" || input.contains("sweep")) {
    for (int g : grid) {
      if (g < 0 || g > schedule.steps()) {
        throw ConfigError("config.sweep: grid value " + std::to_string(g) +
                          " outside [0, T]");
      }
    }
  }
  resolved["sweep"] = {{"grid", grid}, {"samples_per_point", samples}};

  run.validate(schedule.steps());

  LoadedConfig loaded{
      std::move(resolved),
      TaskContext{std::move(schedule),
                  std::make_shared<EmpiricalDenoiser>(
                      encode_dataset(dataset, rules.num_types())),
                  rules, encode_dataset(dataset, rules.num_types()),
                  std::move(run)},
      task,
      std::move(seeds),
      baseline,
      std::move(grid),
      samples,
      std::move(sweep_parents)};
  return loaded;
}

ExperimentSpec experiment_spec(const LoadedConfig &config) {
  ExperimentSpec spec;
  spec.task = config.task;
  spec.seeds = config.seeds;
  spec.baseline = config.baseline;
  spec.grid = config.sweep_grid;
  spec.samples_per_point = config.sweep_samples;
  spec.parent_indices = config.sweep_parent_indices;
  return spec;
}

}  // namespace egd
