//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_BENCH_HPP
#define EGD_BENCH_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "egd/denoiser.hpp"
#include "egd/evolution.hpp"

namespace egd {

/// Everything needed to run one task: the "pretrained model" (schedule +
/// empirical denoiser + reference set), the chemistry, and the run template.
struct TaskContext {
  NoiseSchedule schedule;
  std::shared_ptr<const EmpiricalDenoiser> denoiser;
  TypeRules rules;
  std::vector<StateTensor> reference;
  RunConfig run;
};

struct ExperimentSpec {
  std::string task;
  std::vector<std::uint64_t> seeds;
  std::string baseline = "none";  // equal_evals | equal_runtime | none
  std::vector<int> grid;          // sweep t_add values
  int samples_per_point = 100;
  /// Indices into the reference set usable as sweep parents (valid entries).
  std::vector<int> parent_indices;
};

// ---- Noise sweep (Fig. 3 analog) ----

struct SweepRow {
  int t_add = 0;
  std::string arm;  // parents | offspring | unconditional
  double atom_stable = 0.0;
  double mol_stable = 0.0;
  double valid = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int samples_per_point = 0;

  const SweepRow &row(int t_add, const std::string &arm) const;
};

SweepResult noise_sweep(const TaskContext &context, const ExperimentSpec &spec);

// ---- Screening baseline and ablations ----

struct ScreeningResult {
  std::vector<double> top_maes;  // best N, ascending
  double best_mae = 0.0;
  double mean_top_mae = 0.0;
  Accounting accounting;
};

/// Draws `samples` unconditional molecules (full-T denoising), evaluates the
/// task objective, and keeps the top N by error.
ScreeningResult screening_baseline(const TaskContext &context,
                                   std::uint64_t seed, std::uint64_t samples);

struct SeedOutcome {
  std::uint64_t seed = 0;
  double egd_final = 0.0;       // mean error over the final population
  double egd_best = 0.0;        // best error in the final population
  double baseline_final = 0.0;  // mean error over the kept top-N
  double baseline_best = 0.0;
  std::uint64_t egd_steps = 0;
  std::uint64_t baseline_steps = 0;
  std::uint64_t egd_evals = 0;
  std::uint64_t baseline_evals = 0;
};

struct ComparisonReport {
  std::string task;
  std::string baseline_kind;
  std::vector<SeedOutcome> per_seed;
  double egd_mean = 0.0;
  double egd_std = 0.0;
  double baseline_mean = 0.0;
  double baseline_std = 0.0;
  double cliffs = 0.0;           // delta(baseline finals, egd finals)
  double improvement_pct = 0.0;  // (baseline - egd) / egd * 100
  // Audited budget parity plus the nominal counts the literature formulas
  // would give, exposed for transparency.
  std::uint64_t egd_total_evals = 0;
  std::uint64_t baseline_total_evals = 0;
  std::uint64_t egd_total_steps = 0;
  std::uint64_t baseline_total_steps = 0;
  double nominal_equal_eval_samples = 0.0;    // R * N per seed
  double nominal_equal_runtime_samples = 0.0; // 1 + R * N / 5 per seed
  /// Per-seed EGD generation metrics, for long-format CSV emission.
  std::vector<std::pair<std::uint64_t, std::vector<MetricRow>>> egd_metric_rows;

  nlohmann::json to_json() const;
};

ComparisonReport ablate_equal_evals(const TaskContext &context,
                                    const ExperimentSpec &spec);
ComparisonReport ablate_equal_runtime(const TaskContext &context,
                                      const ExperimentSpec &spec);

/// Deterministic aggregation of two matched per-seed sample sets.
struct AggregateSummary {
  double egd_mean, egd_std, baseline_mean, baseline_std;
  double cliffs;
  double improvement_pct;
};

AggregateSummary aggregate(const std::vector<double> &egd_finals,
                           const std::vector<double> &baseline_finals);

/// Per-run RunResults for every seed of a task; shared by ablations and the
/// multi-seed invariant checks.
std::vector<RunResult> run_seeds(const TaskContext &context,
                                 const std::vector<std::uint64_t> &seeds);

std::string sweep_csv(const SweepResult &result);
std::string comparison_csv(const ComparisonReport &report);

}  // namespace egd

#endif  // EGD_BENCH_HPP
