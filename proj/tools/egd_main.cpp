//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "egd/bench.hpp"
#include "egd/checkpoint.hpp"
#include "egd/config.hpp"
#include "egd/error.hpp"
#include "egd/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string checkpoint_name(int generation) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "checkpoint_g%04d.json", generation);
  return buf;
}

json load_json_file(const std::string &path) {
  const std::string text = egd::read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error &err) {
    throw egd::ConfigError(path + ": " + err.what());
  }
}

void prepare_run_dir(const fs::path &dir, bool force) {
  if (fs::exists(dir)) {
    if (!force && !fs::is_empty(dir)) {
      throw egd::ConfigError("output directory '" + dir.string() +
                             "' exists; pass --force to overwrite");
    }
  } else {
    fs::create_directories(dir);
  }
}

std::vector<std::string> objective_names(const egd::ObjectiveSpec &spec) {
  std::vector<std::string> names;
  for (const auto &entry : spec.entries) names.push_back(entry.property);
  return names;
}

std::optional<fs::path> latest_checkpoint(const fs::path &dir) {
  std::optional<fs::path> best;
  int best_gen = -1;
  for (const auto &entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    int gen = -1;
    if (std::sscanf(name.c_str(), "checkpoint_g%d.json", &gen) == 1 &&
        gen > best_gen) {
      best_gen = gen;
      best = entry.path();
    }
  }
  return best;
}

struct RunArtifacts {
  egd::RunResult result;
  std::vector<std::pair<int, egd::Population>> per_generation;
};

RunArtifacts execute_run(const egd::LoadedConfig &config, const fs::path &dir,
                         const std::optional<egd::Checkpoint> &resume) {
  const std::string hash = egd::config_hash(config.resolved);
  RunArtifacts artifacts;

  egd::CheckpointSink sink = [&](const egd::Checkpoint &ck) {
    egd::write_text_file((dir / checkpoint_name(ck.generation)).string(),
                         egd::checkpoint_to_json(ck).dump(2) + "\n");
    artifacts.per_generation.emplace_back(ck.generation, ck.population);
  };

  egd::Engine engine(config.context.schedule, config.context.denoiser,
                     config.context.rules, config.context.reference,
                     config.context.run);
  artifacts.result = engine.run(resume, sink, hash);
  return artifacts;
}

void write_run_outputs(const egd::LoadedConfig &config, const fs::path &dir,
                       const RunArtifacts &artifacts) {
  const auto &result = artifacts.result;
  std::string metrics = egd::metrics_csv_header();
  egd::append_metrics_csv(metrics, config.task, config.context.run.seed,
                          result.rows);
  egd::write_text_file((dir / "metrics.csv").string(), metrics);

  std::vector<std::pair<int, const egd::Population *>> generations;
  for (const auto &[gen, pop] : artifacts.per_generation) {
    generations.emplace_back(gen, &pop);
  }
  egd::write_text_file(
      (dir / "individuals.csv").string(),
      egd::individuals_csv(generations,
                           config.context.run.objective.entries.size()));

  json report{{"command", "run"},
              {"task", config.task},
              {"seed", config.context.run.seed},
              {"config_hash", egd::config_hash(config.resolved)},
              {"generations", result.generations_recorded()},
              {"reverse_steps", result.accounting.reverse_steps},
              {"evaluations", result.accounting.evaluations}};
  if (config.context.run.mode == egd::RunMode::kSingle) {
    report["final_best_mae"] = result.final_best_mae();
    report["final_best_penalized"] =
        result.metric(result.generations_recorded() - 1, "best_penalized");
  } else {
    report["final_hv_archive"] =
        result.metric(result.generations_recorded() - 1, "hv_archive");
    report["final_hv_best"] =
        result.metric(result.generations_recorded() - 1, "hv_best");
    egd::write_text_file(
        (dir / "front.csv").string(),
        egd::front_csv(result.best_front,
                       objective_names(config.context.run.objective)));
  }
  egd::write_text_file((dir / "report.json").string(), report.dump(2) + "\n");
}

int cmd_run(const std::string &config_path, const std::string &out_dir,
            long long seed_override, const std::string &resume_dir,
            bool force) {
  std::optional<egd::Checkpoint> resume;
  egd::LoadedConfig config =
      resume_dir.empty()
          ? egd::resolve_config(load_json_file(config_path), seed_override)
          : egd::resolve_config(
                load_json_file(
                    (fs::path(resume_dir) / "config.resolved.json").string()),
                -1);
  const fs::path dir =
      resume_dir.empty() ? fs::path(out_dir) : fs::path(resume_dir);
  if (resume_dir.empty()) {
    prepare_run_dir(dir, force);
    egd::write_text_file((dir / "config.resolved.json").string(),
                         config.resolved.dump(2) + "\n");
  } else {
    const auto ck_path = latest_checkpoint(dir);
    if (!ck_path) {
      throw egd::ConfigError("no checkpoint found in '" + dir.string() + "'");
    }
    egd::Checkpoint ck = egd::checkpoint_from_json(
        load_json_file(ck_path->string()), config.context.rules);
    if (ck.config_hash != egd::config_hash(config.resolved)) {
      throw egd::ConfigError("checkpoint config hash mismatch in '" +
                             dir.string() + "'");
    }
    resume = std::move(ck);
  }

  RunArtifacts artifacts = execute_run(config, dir, resume);
  if (resume) {
    // Rebuild the per-generation table from the checkpoints on disk so the
    // individuals table covers the pre-resume generations too.
    artifacts.per_generation.clear();
    for (int g = 0; g < artifacts.result.generations_recorded(); ++g) {
      const fs::path path = dir / checkpoint_name(g);
      const egd::Checkpoint ck = egd::checkpoint_from_json(
          load_json_file(path.string()), config.context.rules);
      artifacts.per_generation.emplace_back(g, ck.population);
    }
  }
  write_run_outputs(config, dir, artifacts);
  return kExitOk;
}

int cmd_ablate(const std::string &config_path, const std::string &out_dir,
               const std::string &mode, long long seed_override, bool force) {
  egd::LoadedConfig config =
      egd::resolve_config(load_json_file(config_path), seed_override);
  const fs::path dir(out_dir);
  prepare_run_dir(dir, force);
  egd::write_text_file((dir / "config.resolved.json").string(),
                       config.resolved.dump(2) + "\n");

  egd::ExperimentSpec spec = egd::experiment_spec(config);
  const egd::ComparisonReport report =
      mode == "runtime" ? egd::ablate_equal_runtime(config.context, spec)
                        : egd::ablate_equal_evals(config.context, spec);

  std::string metrics = egd::metrics_csv_header();
  for (const auto &[seed, rows] : report.egd_metric_rows) {
    egd::append_metrics_csv(metrics, config.task + "/egd", seed, rows);
  }
  for (const auto &outcome : report.per_seed) {
    egd::append_metrics_csv(
        metrics, config.task + "/baseline", outcome.seed,
        {{config.context.run.iterations, "final_mean_mae",
          outcome.baseline_final},
         {config.context.run.iterations, "final_best_mae",
          outcome.baseline_best}});
  }
  egd::write_text_file((dir / "metrics.csv").string(), metrics);
  egd::write_text_file((dir / "per_seed.csv").string(),
                       egd::comparison_csv(report));
  egd::write_text_file((dir / "report.json").string(),
                       report.to_json().dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep(const std::string &config_path, const std::string &out_dir,
              long long seed_override, bool force) {
  egd::LoadedConfig config =
      egd::resolve_config(load_json_file(config_path), seed_override);
  const fs::path dir(out_dir);
  prepare_run_dir(dir, force);
  egd::write_text_file((dir / "config.resolved.json").string(),
                       config.resolved.dump(2) + "\n");

  egd::ExperimentSpec spec = egd::experiment_spec(config);
  if (spec.parent_indices.empty()) {
    throw egd::ConfigError(
        "sweep requires the sweep dataset (set dataset.kind = \"sweep\")");
  }
  const egd::SweepResult result = egd::noise_sweep(config.context, spec);
  egd::write_text_file((dir / "sweep.csv").string(), egd::sweep_csv(result));

  json rows = json::array();
  for (const auto &row : result.rows) {
    rows.push_back({{"t_add", row.t_add},
                    {"arm", row.arm},
                    {"atom_stable", row.atom_stable},
                    {"mol_stable", row.mol_stable},
                    {"valid", row.valid}});
  }
  json report{{"command", "sweep"},
              {"task", config.task},
              {"samples_per_point", result.samples_per_point},
              {"rows", rows},
              {"config_hash", egd::config_hash(config.resolved)}};
  egd::write_text_file((dir / "report.json").string(), report.dump(2) + "\n");
  return kExitOk;
}

int cmd_fragment_demo(const std::string &config_path,
                      const std::string &out_dir, long long seed_override,
                      bool force) {
  egd::LoadedConfig config =
      egd::resolve_config(load_json_file(config_path), seed_override);
  if (!config.context.run.fragment) {
    throw egd::ConfigError("fragment-demo requires a fragment (task T4 or an "
                           "explicit fragment block)");
  }
  const fs::path dir(out_dir);
  prepare_run_dir(dir, force);
  egd::write_text_file((dir / "config.resolved.json").string(),
                       config.resolved.dump(2) + "\n");

  RunArtifacts artifacts = execute_run(config, dir, std::nullopt);
  write_run_outputs(config, dir, artifacts);

  egd::write_text_file(
      (dir / "fragment.xyz").string(),
      config.context.run.fragment->molecule.to_xyz("constraint fragment"));
  std::string molecules;
  for (std::size_t i = 0; i < artifacts.result.population.size(); ++i) {
    molecules += artifacts.result.population[i].molecule.to_xyz(
        "final individual " + std::to_string(i));
  }
  egd::write_text_file((dir / "final_molecules.xyz").string(), molecules);
  return kExitOk;
}

int cmd_report(const std::string &dir) {
  const fs::path path = fs::path(dir) / "report.json";
  if (!fs::exists(path)) {
    throw egd::ConfigError("no report.json in '" + dir + "'");
  }
  const json report = load_json_file(path.string());
  std::printf("%-32s %s\n", "field", "value");
  std::printf("%-32s %s\n", "------", "-----");
  for (const auto &[key, value] : report.items()) {
    if (value.is_array()) {
      std::printf("%-32s [%zu entries]\n", key.c_str(), value.size());
    } else {
      std::printf("%-32s %s\n", key.c_str(), value.dump().c_str());
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"egd: evolutionary-guided diffusion optimization engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string resume_dir;
  std::string report_dir;
  std::string ablate_mode = "evals";
  long long seed_override = -1;
  bool force = false;

  auto *run = app.add_subcommand("run", "Run one optimization task");
  run->add_option("-c,--config", config_path, "Config JSON path");
  run->add_option("-o,--out", out_dir, "Output directory");
  run->add_option("--seed", seed_override, "Seed override");
  run->add_option("--resume", resume_dir, "Resume from a run directory");
  run->add_flag("--force", force, "Overwrite an existing run directory");

  auto *ablate = app.add_subcommand("ablate", "EGD vs screening ablation");
  ablate->add_option("-c,--config", config_path, "Config JSON path")
      ->required();
  ablate->add_option("-o,--out", out_dir, "Output directory")->required();
  ablate->add_option("--mode", ablate_mode, "evals or runtime")
      ->check(CLI::IsMember({"evals", "runtime"}));
  ablate->add_option("--seed", seed_override, "Seed override");
  ablate->add_flag("--force", force, "Overwrite an existing run directory");

  auto *sweep = app.add_subcommand("sweep", "Noise-crossover validity sweep");
  sweep->add_option("-c,--config", config_path, "Config JSON path")
      ->required();
  sweep->add_option("-o,--out", out_dir, "Output directory")->required();
  sweep->add_option("--seed", seed_override, "Seed override");
  sweep->add_flag("--force", force, "Overwrite an existing run directory");

  auto *report = app.add_subcommand("report", "Render a report.json");
  report->add_option("dir", report_dir, "Run directory")->required();

  auto *demo = app.add_subcommand("fragment-demo",
                                  "Fragment-constrained multi-objective demo");
  demo->add_option("-c,--config", config_path, "Config JSON path")->required();
  demo->add_option("-o,--out", out_dir, "Output directory")->required();
  demo->add_option("--seed", seed_override, "Seed override");
  demo->add_flag("--force", force, "Overwrite an existing run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      if (resume_dir.empty() && (config_path.empty() || out_dir.empty())) {
        throw egd::ConfigError("run needs -c and -o (or --resume)");
      }
      return cmd_run(config_path, out_dir, seed_override, resume_dir, force);
    }
    if (ablate->parsed()) {
      return cmd_ablate(config_path, out_dir, ablate_mode, seed_override,
                        force);
    }
    if (sweep->parsed()) {
      return cmd_sweep(config_path, out_dir, seed_override, force);
    }
    if (report->parsed()) return cmd_report(report_dir);
    if (demo->parsed()) {
      return cmd_fragment_demo(config_path, out_dir, seed_override, force);
    }
  } catch (const egd::ConfigError &err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
