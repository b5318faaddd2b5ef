//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"
#include "egd/fitness.hpp"
#include "egd/io.hpp"
#include "egd/parallel.hpp"

namespace egd {

namespace {

constexpr std::uint64_t kBenchTag =
    static_cast<std::uint64_t>(StreamPhase::kBench);

struct ValidityTally {
  double atom_stable = 0.0;
  int mol_stable = 0;
  int valid = 0;
};

SweepRow tally_to_row(int t_add, const std::string &arm,
                      const std::vector<ValidityTally> &tallies) {
  SweepRow row;
  row.t_add = t_add;
  row.arm = arm;
  const double n = static_cast<double>(tallies.size());
  for (const auto &t : tallies) {
    row.atom_stable += t.atom_stable;
    row.mol_stable += t.mol_stable;
    row.valid += t.valid;
  }
  row.atom_stable /= n;
  row.mol_stable /= n;
  row.valid /= n;
  return row;
}

ValidityTally check_state(const StateTensor &clean, const TypeRules &rules) {
  const Molecule mol = decode(clean, rules);
  const ValidityReport report = check_validity(mol, rules);
  return {report.atom_stable_fraction, report.molecule_stable ? 1 : 0,
          report.valid ? 1 : 0};
}

double sample_std(const std::vector<double> &xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / (static_cast<double>(xs.size()) - 1.0));
}

}  // namespace

const SweepRow &SweepResult::row(int t_add, const std::string &arm) const {
  for (const auto &r : rows) {
    if (r.t_add == t_add && r.arm == arm) return r;
  }
  throw Error("SweepResult: no row for t_add " + std::to_string(t_add) +
              ", arm " + arm);
}

SweepResult noise_sweep(const TaskContext &context, const ExperimentSpec &spec) {
  if (spec.parent_indices.empty()) {
    throw ConfigError("noise_sweep: no valid parent indices configured");
  }
  for (int t_add : spec.grid) {
    if (t_add < 0 || t_add > context.schedule.steps()) {
      throw ConfigError("noise_sweep: grid value outside schedule range");
    }
  }
  const int samples = spec.samples_per_point;
  const std::uint64_t seed = context.run.seed;
  const auto &schedule = context.schedule;
  const Denoiser &denoiser = *context.denoiser;

  SweepResult result;
  result.samples_per_point = samples;

  for (int t_add : spec.grid) {
    std::vector<ValidityTally> parents(samples);
    std::vector<ValidityTally> offspring(samples);
    const auto t_tag = static_cast<std::uint64_t>(t_add);

    parallel_for(samples, [&](int s) {
      Rng rng = derive_rng(seed, {kBenchTag, 1, t_tag,
                                  static_cast<std::uint64_t>(s)});
      const int pick =
          spec.parent_indices[rng.uniform_int(
              0, static_cast<int>(spec.parent_indices.size()) - 1)];
      const StateTensor &parent = context.reference[pick];
      StateTensor clean;
      if (t_add == 0) {
        clean = parent;
      } else {
        const StateTensor noised = forward_noise(parent, t_add, schedule, rng);
        clean = denoise_from(noised, schedule, denoiser, rng,
                             context.run.stochastic_denoise);
      }
      parents[s] = check_state(clean, context.rules);
    });

    parallel_for(samples, [&](int s) {
      Rng rng = derive_rng(seed, {kBenchTag, 2, t_tag,
                                  static_cast<std::uint64_t>(s)});
      const int count = static_cast<int>(spec.parent_indices.size());
      const int first = rng.uniform_int(0, count - 1);
      int second = rng.uniform_int(0, count - 2);
      if (second >= first) ++second;
      const StateTensor &pa = context.reference[spec.parent_indices[first]];
      const StateTensor &pb = context.reference[spec.parent_indices[second]];
      StateTensor clean;
      if (t_add == 0) {
        StateTensor off = crossover_noised(pa, pb, context.run.crossover, rng);
        off.center();
        clean = off;
      } else {
        const StateTensor na = forward_noise(pa, t_add, schedule, rng);
        const StateTensor nb = forward_noise(pb, t_add, schedule, rng);
        StateTensor off = crossover_noised(na, nb, context.run.crossover, rng);
        off.center();
        clean = denoise_from(off, schedule, denoiser, rng,
                             context.run.stochastic_denoise);
      }
      offspring[s] = check_state(clean, context.rules);
    });

    result.rows.push_back(tally_to_row(t_add, "parents", parents));
    result.rows.push_back(tally_to_row(t_add, "offspring", offspring));
  }

  // Unconditional arm: full-T denoising from pure noise, one row at t = T.
  std::vector<ValidityTally> unconditional(samples);
  parallel_for(samples, [&](int s) {
    Rng rng = derive_rng(seed, {kBenchTag, 3, static_cast<std::uint64_t>(s)});
    const int pick = rng.uniform_int(
        0, static_cast<int>(context.reference.size()) - 1);
    StateTensor noise;
    noise.coords = gaussian_matrix(context.reference[pick].atoms(), 3, rng);
    project_com_free(noise.coords);
    noise.feats = gaussian_matrix(context.reference[pick].atoms(),
                                  context.reference[pick].feat_dim(), rng);
    noise.t = schedule.steps();
    const StateTensor clean = denoise_from(noise, schedule, denoiser, rng,
                                           context.run.stochastic_denoise);
    unconditional[s] = check_state(clean, context.rules);
  });
  result.rows.push_back(
      tally_to_row(schedule.steps(), "unconditional", unconditional));
  return result;
}

ScreeningResult screening_baseline(const TaskContext &context,
                                   std::uint64_t seed, std::uint64_t samples) {
  const auto &schedule = context.schedule;
  std::vector<double> maes(samples);
  parallel_for(static_cast<int>(samples), [&](int i) {
    Rng rng = derive_rng(seed, {kBenchTag, 4, static_cast<std::uint64_t>(i)});
    const int pick = rng.uniform_int(
        0, static_cast<int>(context.reference.size()) - 1);
    StateTensor noise;
    noise.coords = gaussian_matrix(context.reference[pick].atoms(), 3, rng);
    project_com_free(noise.coords);
    noise.feats = gaussian_matrix(context.reference[pick].atoms(),
                                  context.reference[pick].feat_dim(), rng);
    noise.t = schedule.steps();
    const StateTensor clean =
        denoise_from(noise, schedule, *context.denoiser, rng,
                     context.run.stochastic_denoise);
    const Molecule mol = decode(clean, context.rules);
    const FitnessRecord rec = evaluate_objective(
        context.run.objective, mol, context.rules,
        context.run.fragment ? &context.run.fragment.value() : nullptr);
    maes[i] = rec.mae;
  });

  ScreeningResult out;
  out.accounting.reverse_steps =
      samples * static_cast<std::uint64_t>(schedule.steps());
  out.accounting.evaluations = samples;
  std::sort(maes.begin(), maes.end());
  const std::size_t keep =
      std::min<std::size_t>(maes.size(),
                            static_cast<std::size_t>(
                                context.run.population_size));
  out.top_maes.assign(maes.begin(), maes.begin() + keep);
  out.best_mae = out.top_maes.empty() ? 0.0 : out.top_maes.front();
  double sum = 0.0;
  for (double v : out.top_maes) sum += v;
  out.mean_top_mae = out.top_maes.empty() ? 0.0 : sum / keep;
  return out;
}

std::vector<RunResult> run_seeds(const TaskContext &context,
                                 const std::vector<std::uint64_t> &seeds) {
  std::vector<RunResult> results;
  results.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    RunConfig config = context.run;
    config.seed = seed;
    Engine engine(context.schedule, context.denoiser, context.rules,
                  context.reference, config);
    results.push_back(engine.run());
  }
  return results;
}

AggregateSummary aggregate(const std::vector<double> &egd_finals,
                           const std::vector<double> &baseline_finals) {
  if (egd_finals.size() != baseline_finals.size()) {
    throw Error("aggregate: seed-count mismatch between arms");
  }
  if (egd_finals.size() < 2) {
    throw Error("aggregate: need at least two seeds");
  }
  AggregateSummary summary{};
  double egd_sum = 0.0;
  double base_sum = 0.0;
  for (double v : egd_finals) egd_sum += v;
  for (double v : baseline_finals) base_sum += v;
  summary.egd_mean = egd_sum / static_cast<double>(egd_finals.size());
  summary.baseline_mean =
      base_sum / static_cast<double>(baseline_finals.size());
  summary.egd_std = sample_std(egd_finals, summary.egd_mean);
  summary.baseline_std = sample_std(baseline_finals, summary.baseline_mean);
  summary.cliffs = cliffs_delta(baseline_finals, egd_finals);
  summary.improvement_pct =
      summary.egd_mean == 0.0
          ? 0.0
          : (summary.baseline_mean - summary.egd_mean) / summary.egd_mean *
                100.0;
  return summary;
}

namespace {

ComparisonReport run_ablation(const TaskContext &context,
                              const ExperimentSpec &spec, bool runtime_parity) {
  if (spec.seeds.size() < 2) {
    throw ConfigError("ablate: need at least two seeds");
  }
  if (context.run.mode != RunMode::kSingle) {
    throw ConfigError("ablate: single-objective task required");
  }
  ComparisonReport report;
  report.task = spec.task;
  report.baseline_kind = runtime_parity ? "equal_runtime" : "equal_evals";

  const double n = context.run.population_size;
  const double r = context.run.iterations;
  report.nominal_equal_eval_samples = r * n;
  report.nominal_equal_runtime_samples = 1.0 + r * n / 5.0;

  if (runtime_parity) {
    const int t = context.schedule.steps();
    if (context.run.t_add * 5 != t) {
      // Accounting generalizes to any t_add / T; the 1/5 ratio is only the
      // canonical configuration.
      std::fprintf(stderr,
                   "warning: equal-runtime ablation with t_add != T/5 "
                   "(t_add = %d, T = %d)\n",
                   context.run.t_add, t);
    }
  }

  std::vector<double> egd_finals;
  std::vector<double> baseline_finals;
  for (std::uint64_t seed : spec.seeds) {
    RunConfig config = context.run;
    config.seed = seed;
    Engine engine(context.schedule, context.denoiser, context.rules,
                  context.reference, config);
    const RunResult egd = engine.run();

    double final_sum = 0.0;
    double final_best = egd.population.empty()
                            ? 0.0
                            : egd.population.front().fitness.mae;
    for (const auto &ind : egd.population) {
      final_sum += ind.fitness.mae;
      final_best = std::min(final_best, ind.fitness.mae);
    }
    const double egd_final =
        final_sum / static_cast<double>(egd.population.size());

    // Budget parity is derived from the audited ledger, not assumed.
    const std::uint64_t t_steps =
        static_cast<std::uint64_t>(context.schedule.steps());
    const std::uint64_t baseline_samples =
        runtime_parity
            ? (egd.accounting.reverse_steps + t_steps - 1) / t_steps
            : egd.accounting.evaluations;
    const ScreeningResult baseline = screening_baseline(
        context, derive_seed(seed, {kBenchTag, 5}), baseline_samples);

    if (!runtime_parity &&
        baseline.accounting.evaluations != egd.accounting.evaluations) {
      throw Error("ablate: evaluation budget mismatch");
    }
    if (runtime_parity) {
      const std::uint64_t diff =
          baseline.accounting.reverse_steps >= egd.accounting.reverse_steps
              ? baseline.accounting.reverse_steps - egd.accounting.reverse_steps
              : egd.accounting.reverse_steps - baseline.accounting.reverse_steps;
      if (baseline.accounting.reverse_steps < egd.accounting.reverse_steps ||
          diff >= t_steps) {
        throw Error("ablate: runtime budget parity violated");
      }
    }

    SeedOutcome outcome;
    outcome.seed = seed;
    outcome.egd_final = egd_final;
    outcome.egd_best = final_best;
    outcome.baseline_final = baseline.mean_top_mae;
    outcome.baseline_best = baseline.best_mae;
    outcome.egd_steps = egd.accounting.reverse_steps;
    outcome.baseline_steps = baseline.accounting.reverse_steps;
    outcome.egd_evals = egd.accounting.evaluations;
    outcome.baseline_evals = baseline.accounting.evaluations;
    report.per_seed.push_back(outcome);

    report.egd_total_evals += outcome.egd_evals;
    report.baseline_total_evals += outcome.baseline_evals;
    report.egd_total_steps += outcome.egd_steps;
    report.baseline_total_steps += outcome.baseline_steps;
    report.egd_metric_rows.emplace_back(seed, egd.rows);

    egd_finals.push_back(egd_final);
    baseline_finals.push_back(baseline.mean_top_mae);
  }

  const AggregateSummary summary = aggregate(egd_finals, baseline_finals);
  report.egd_mean = summary.egd_mean;
  report.egd_std = summary.egd_std;
  report.baseline_mean = summary.baseline_mean;
  report.baseline_std = summary.baseline_std;
  report.cliffs = summary.cliffs;
  report.improvement_pct = summary.improvement_pct;
  return report;
}

}  // namespace

ComparisonReport ablate_equal_evals(const TaskContext &context,
                                    const ExperimentSpec &spec) {
  return run_ablation(context, spec, false);
}

ComparisonReport ablate_equal_runtime(const TaskContext &context,
                                      const ExperimentSpec &spec) {
  return run_ablation(context, spec, true);
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto &s : per_seed) {
    seeds.push_back({{"seed", s.seed},
                     {"egd_final", s.egd_final},
                     {"egd_best", s.egd_best},
                     {"baseline_final", s.baseline_final},
                     {"baseline_best", s.baseline_best},
                     {"egd_steps", s.egd_steps},
                     {"baseline_steps", s.baseline_steps},
                     {"egd_evals", s.egd_evals},
                     {"baseline_evals", s.baseline_evals}});
  }
  return {{"task", task},
          {"baseline", baseline_kind},
          {"per_seed", seeds},
          {"egd_mean", egd_mean},
          {"egd_std", egd_std},
          {"baseline_mean", baseline_mean},
          {"baseline_std", baseline_std},
          {"cliffs_delta", cliffs},
          {"improvement_pct", improvement_pct},
          {"egd_total_evals", egd_total_evals},
          {"baseline_total_evals", baseline_total_evals},
          {"egd_total_steps", egd_total_steps},
          {"baseline_total_steps", baseline_total_steps},
          {"nominal_equal_eval_samples", nominal_equal_eval_samples},
          {"nominal_equal_runtime_samples", nominal_equal_runtime_samples}};
}

std::string sweep_csv(const SweepResult &result) {
  std::ostringstream out;
  out << "t_add,arm,metric,value\n";
  for (const auto &row : result.rows) {
    out << row.t_add << "," << row.arm << ",atom_stable,"
        << format_double(row.atom_stable) << "\n";
    out << row.t_add << "," << row.arm << ",mol_stable,"
        << format_double(row.mol_stable) << "\n";
    out << row.t_add << "," << row.arm << ",valid," << format_double(row.valid)
        << "\n";
  }
  return out.str();
}

std::string comparison_csv(const ComparisonReport &report) {
  std::ostringstream out;
  out << "task,baseline,seed,egd_final,egd_best,baseline_final,baseline_best,"
         "egd_steps,baseline_steps,egd_evals,baseline_evals\n";
  for (const auto &s : report.per_seed) {
    out << report.task << "," << report.baseline_kind << "," << s.seed << ","
        << format_double(s.egd_final) << "," << format_double(s.egd_best)
        << "," << format_double(s.baseline_final) << ","
        << format_double(s.baseline_best) << "," << s.egd_steps << ","
        << s.baseline_steps << "," << s.egd_evals << "," << s.baseline_evals
        << "\n";
  }
  return out.str();
}

}  // namespace egd
