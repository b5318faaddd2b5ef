//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "egd/error.hpp"
#include "egd/parallel.hpp"
#include "egd/properties.hpp"

namespace egd {

namespace {

constexpr std::uint64_t tag(StreamPhase phase) {
  return static_cast<std::uint64_t>(phase);
}

double tournament_key(const Individual &ind, RunMode mode) {
  return mode == RunMode::kSingle ? ind.fitness.scalar_fitness
                                  : ind.fitness.spea2_fitness;
}

}  // namespace

void RunConfig::validate(int schedule_steps) const {
  if (population_size < 2) throw ConfigError("run: N must be >= 2");
  if (iterations < 0) throw ConfigError("run: R must be >= 0");
  if (t_add < 1 || t_add > schedule_steps) {
    throw ConfigError("run: t_add must lie in [1, T]; got t_add = " +
                      std::to_string(t_add) + ", T = " +
                      std::to_string(schedule_steps));
  }
  if (k_tournament < 1 || k_tournament > population_size) {
    throw ConfigError("run: k_tournament must lie in [1, N]");
  }
  objective.validate();
  if (mode == RunMode::kMulti) {
    if (objective.entries.size() < 2) {
      throw ConfigError("run: multi mode needs at least two objectives");
    }
    if (objective_bounds.size() != objective.entries.size()) {
      throw ConfigError("run: multi mode needs objective_bounds per entry");
    }
    if (archive_size != 0 && archive_size != population_size) {
      throw ConfigError("run: archive_size must equal N (population is the "
                        "archive after environmental selection)");
    }
  }
  if (objective.has_containment() && !fragment.has_value()) {
    throw ConfigError("run: containment constraint configured without a "
                      "fragment");
  }
}

int RunResult::generations_recorded() const {
  int max_gen = -1;
  for (const auto &row : rows) max_gen = std::max(max_gen, row.generation);
  return max_gen + 1;
}

double RunResult::metric(int generation, const std::string &name) const {
  for (const auto &row : rows) {
    if (row.generation == generation && row.metric == name) return row.value;
  }
  throw Error("RunResult: no metric '" + name + "' for generation " +
              std::to_string(generation));
}

double RunResult::final_best_mae() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &ind : population) best = std::min(best, ind.fitness.mae);
  return best;
}

std::vector<int> tournament_select(const Population &population, int k,
                                   int count, RunMode mode, Rng &rng) {
  if (population.empty()) throw Error("tournament_select: empty population");
  const int n = static_cast<int>(population.size());
  if (k < 1 || k > n) throw Error("tournament_select: k outside [1, N]");

  std::vector<int> selected;
  selected.reserve(count);
  for (int c = 0; c < count; ++c) {
    int best = rng.uniform_int(0, n - 1);
    for (int draw = 1; draw < k; ++draw) {
      const int idx = rng.uniform_int(0, n - 1);
      const double cand = tournament_key(population[idx], mode);
      const double cur = tournament_key(population[best], mode);
      if (cand < cur || (cand == cur && idx < best)) best = idx;
    }
    selected.push_back(best);
  }
  return selected;
}

StateTensor uniform_mask_crossover(const StateTensor &a, const StateTensor &b,
                                   const std::vector<bool> &take_a) {
  if (a.t != b.t) throw Error("crossover: parents at different t");
  if (!a.same_shape(b)) throw Error("crossover: parent shape mismatch");
  if (static_cast<int>(take_a.size()) != a.atoms()) {
    throw Error("crossover: mask length mismatch");
  }
  StateTensor out = a;
  for (int i = 0; i < a.atoms(); ++i) {
    if (!take_a[i]) {
      out.coords.row(i) = b.coords.row(i);
      out.feats.row(i) = b.feats.row(i);
    }
  }
  return out;
}

StateTensor crossover_noised(const StateTensor &a, const StateTensor &b,
                             CrossoverOp op, Rng &rng) {
  if (a.t != b.t) throw Error("crossover: parents at different t");
  if (!a.same_shape(b)) throw Error("crossover: parent shape mismatch");
  if (op == CrossoverOp::kUniformMask) {
    std::vector<bool> mask(a.atoms());
    for (int i = 0; i < a.atoms(); ++i) mask[i] = rng.bernoulli(0.5);
    return uniform_mask_crossover(a, b, mask);
  }
  const double w = rng.uniform();
  StateTensor out;
  out.coords = w * a.coords + (1.0 - w) * b.coords;
  out.feats = w * a.feats + (1.0 - w) * b.feats;
  out.t = a.t;
  return out;
}

StateTensor reconcile_to_size(const StateTensor &parent, int target_atoms,
                              const NoiseSchedule &schedule, Rng &rng) {
  const int n = parent.atoms();
  if (target_atoms == n) return parent;

  StateTensor out;
  out.t = parent.t;
  if (target_atoms < n) {
    // Keep the rows nearest the centroid (states are CoM-free), ties by index.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
      return parent.coords.row(i).squaredNorm() <
             parent.coords.row(j).squaredNorm();
    });
    order.resize(target_atoms);
    std::sort(order.begin(), order.end());
    out.coords.resize(target_atoms, 3);
    out.feats.resize(target_atoms, parent.feat_dim());
    for (int r = 0; r < target_atoms; ++r) {
      out.coords.row(r) = parent.coords.row(order[r]);
      out.feats.row(r) = parent.feats.row(order[r]);
    }
  } else {
    out.coords.resize(target_atoms, 3);
    out.feats.resize(target_atoms, parent.feat_dim());
    out.coords.topRows(n) = parent.coords;
    out.feats.topRows(n) = parent.feats;
    const double noise = std::sqrt(1.0 - schedule.alpha_bar(parent.t));
    for (int r = n; r < target_atoms; ++r) {
      const int src = (r - n) % n;
      for (int c = 0; c < 3; ++c) {
        out.coords(r, c) = parent.coords(src, c) + noise * rng.gaussian();
      }
      for (int c = 0; c < parent.feat_dim(); ++c) {
        out.feats(r, c) = parent.feats(src, c) + noise * rng.gaussian();
      }
    }
  }
  out.center();
  return out;
}

StateTensor inject_fragment(const StateTensor &offspring_t,
                            const Fragment &fragment, int num_types,
                            const NoiseSchedule &schedule, int t_add, Rng &rng,
                            bool zero_noise) {
  const int fn = fragment.atoms();
  if (fn > offspring_t.atoms()) {
    throw Error("inject_fragment: fragment larger than offspring");
  }
  if (offspring_t.t != t_add) {
    throw Error("inject_fragment: offspring not at t_add");
  }

  const StateTensor clean = encode(fragment.molecule, num_types);
  StateTensor noised;
  if (zero_noise) {
    noised = forward_noise_with(clean, t_add, schedule,
                                Eigen::MatrixXd::Zero(fn, 3),
                                Eigen::MatrixXd::Zero(fn, num_types));
  } else {
    noised = forward_noise(clean, t_add, schedule, rng);
  }

  const int offset = rng.uniform_int(0, offspring_t.atoms() - fn);
  StateTensor out = offspring_t;
  const Eigen::RowVector3d target =
      out.coords.middleRows(offset, fn).colwise().mean();
  const Eigen::RowVector3d shift =
      target - noised.coords.colwise().mean().eval();
  out.coords.middleRows(offset, fn) = noised.coords.rowwise() + shift;
  out.feats.middleRows(offset, fn) = noised.feats;
  out.center();
  return out;
}

std::vector<std::size_t> spea2_environmental_select(
    const std::vector<FitnessRecord> &records, std::size_t n_keep,
    const std::optional<std::vector<std::pair<double, double>>> &bounds) {
  if (records.size() < n_keep) {
    throw Error("spea2_environmental_select: pool smaller than target size");
  }
  const int k = std::max(
      1, static_cast<int>(std::floor(std::sqrt(
             static_cast<double>(records.size())))));
  const Spea2Assignment assign = spea2_assign(records, k, bounds);

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (assign.fitness[i] < 1.0) survivors.push_back(i);
  }

  if (survivors.size() < n_keep) {
    // Fill with the best dominated records by F, ties by index.
    std::vector<std::size_t> dominated;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (assign.fitness[i] >= 1.0) dominated.push_back(i);
    }
    std::stable_sort(dominated.begin(), dominated.end(),
                     [&](std::size_t a, std::size_t b) {
                       return assign.fitness[a] < assign.fitness[b];
                     });
    for (std::size_t i = 0; survivors.size() < n_keep; ++i) {
      survivors.push_back(dominated[i]);
    }
    std::sort(survivors.begin(), survivors.end());
    return survivors;
  }

  // Overflow: iteratively drop the member with the lexicographically smallest
  // sorted distance profile to the other survivors.
  auto point = [&](std::size_t i) {
    return bounds ? normalize_objectives(records[i].objectives, *bounds)
                  : records[i].objectives;
  };
  while (survivors.size() > n_keep) {
    std::vector<std::vector<double>> profiles(survivors.size());
    for (std::size_t a = 0; a < survivors.size(); ++a) {
      profiles[a].reserve(survivors.size() - 1);
      const auto pa = point(survivors[a]);
      for (std::size_t b = 0; b < survivors.size(); ++b) {
        if (a == b) continue;
        const auto pb = point(survivors[b]);
        double sq = 0.0;
        for (std::size_t c = 0; c < pa.size(); ++c) {
          const double diff = pa[c] - pb[c];
          sq += diff * diff;
        }
        profiles[a].push_back(sq);
      }
      std::sort(profiles[a].begin(), profiles[a].end());
    }
    std::size_t drop = 0;
    for (std::size_t a = 1; a < survivors.size(); ++a) {
      if (profiles[a] < profiles[drop]) drop = a;
    }
    survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return survivors;
}

Engine::Engine(NoiseSchedule schedule, std::shared_ptr<const Denoiser> denoiser,
               TypeRules rules, std::vector<StateTensor> reference,
               RunConfig config)
    : schedule_(std::move(schedule)),
      denoiser_(std::move(denoiser)),
      rules_(std::move(rules)),
      reference_(std::move(reference)),
      config_(std::move(config)),
      num_types_(rules_.num_types()) {
  config_.validate(schedule_.steps());
  if (reference_.empty()) {
    throw ConfigError("engine: reference dataset must be non-empty");
  }
}

Individual Engine::make_individual(const StateTensor &clean,
                                   int generation) const {
  Individual ind;
  ind.molecule = decode(clean, rules_);
  ind.state = encode(ind.molecule, num_types_);
  ind.fitness = evaluate_objective(
      config_.objective, ind.molecule, rules_,
      config_.fragment ? &config_.fragment.value() : nullptr);
  ind.birth_generation = generation;
  return ind;
}

Population Engine::initialize_population(Accounting &accounting) const {
  const int n = config_.population_size;
  Population population(n);

  if (config_.init == InitMode::kDataset) {
    // Seeded shuffle; each entry appears once when the dataset has >= N
    // entries (exactly once each when it has exactly N).
    Rng rng = derive_rng(config_.seed, {0, tag(StreamPhase::kInit)});
    std::vector<int> order(reference_.size());
    std::iota(order.begin(), order.end(), 0);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_int(0, i)]);
    }
    for (int i = 0; i < n; ++i) {
      const auto &entry = order[i % order.size()];
      population[i] = make_individual(reference_[entry], 0);
    }
    accounting.evaluations += static_cast<std::uint64_t>(n);
    return population;
  }

  parallel_for(n, [&](int i) {
    Rng rng = derive_rng(config_.seed,
                         {0, tag(StreamPhase::kInit), static_cast<std::uint64_t>(i)});
    const int pick = rng.uniform_int(0, static_cast<int>(reference_.size()) - 1);
    const int atoms = reference_[pick].atoms();
    const int d = reference_[pick].feat_dim();
    StateTensor noise;
    noise.coords = gaussian_matrix(atoms, 3, rng);
    project_com_free(noise.coords);
    noise.feats = gaussian_matrix(atoms, d, rng);
    noise.t = schedule_.steps();
    const StateTensor clean = denoise_from(noise, schedule_, *denoiser_, rng,
                                           config_.stochastic_denoise);
    population[i] = make_individual(clean, 0);
  });
  accounting.reverse_steps +=
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(schedule_.steps());
  accounting.evaluations += static_cast<std::uint64_t>(n);
  return population;
}

void Engine::assign_scalar_fitness(Population &pool) const {
  double mae_max = 0.0;
  for (const auto &ind : pool) mae_max = std::max(mae_max, ind.fitness.mae);
  for (auto &ind : pool) {
    ind.fitness.scalar_fitness =
        penalized_fitness(ind.fitness.mae, ind.fitness.cv, mae_max);
  }
}

void Engine::record_metrics(const Population &population, int generation,
                            double pool_max_com, RunResult &result) const {
  auto add = [&](const std::string &name, double value) {
    result.rows.push_back({generation, name, value});
  };

  double best_scalar = std::numeric_limits<double>::infinity();
  double sum_scalar = 0.0;
  double best_mae = std::numeric_limits<double>::infinity();
  double feasible = 0.0;
  double valid = 0.0;
  double atom_stable = 0.0;
  double mol_stable = 0.0;
  double containment = 0.0;
  for (const auto &ind : population) {
    best_scalar = std::min(best_scalar, ind.fitness.scalar_fitness);
    sum_scalar += ind.fitness.scalar_fitness;
    best_mae = std::min(best_mae, ind.fitness.mae);
    feasible += ind.fitness.feasible ? 1.0 : 0.0;
    const ValidityReport report = check_validity(ind.molecule, rules_);
    valid += report.valid ? 1.0 : 0.0;
    atom_stable += report.atom_stable_fraction;
    mol_stable += report.molecule_stable ? 1.0 : 0.0;
    if (config_.fragment) {
      containment += containment_ratio(ind.molecule, *config_.fragment);
    }
  }
  const double n = static_cast<double>(population.size());

  add("best_penalized", best_scalar);
  add("mean_penalized", sum_scalar / n);
  add("best_mae", best_mae);
  add("feasible_rate", feasible / n);
  add("valid_rate", valid / n);
  add("atom_stable_rate", atom_stable / n);
  add("mol_stable_rate", mol_stable / n);
  add("max_abs_com", pool_max_com);
  add("reverse_steps", static_cast<double>(result.accounting.reverse_steps));
  add("evaluations", static_cast<double>(result.accounting.evaluations));
  if (config_.fragment) add("containment_mean", containment / n);

  if (config_.mode == RunMode::kMulti) {
    const std::array<double, 2> ref{1.0, 1.0};
    auto to_points = [&](const std::vector<FitnessRecord> &records) {
      std::vector<std::array<double, 2>> pts;
      for (const auto &rec : records) {
        if (!rec.feasible) continue;
        const auto norm =
            normalize_objectives(rec.objectives, config_.objective_bounds);
        pts.push_back({norm[0], norm[1]});
      }
      return pts;
    };

    std::vector<FitnessRecord> pop_records;
    for (const auto &ind : population) pop_records.push_back(ind.fitness);
    add("hv_archive", hypervolume_2d(to_points(pop_records), ref));

    // Accumulate the best-so-far non-dominated feasible set.
    std::vector<FitnessRecord> merged = result.best_front;
    for (const auto &rec : pop_records) {
      if (rec.feasible) merged.push_back(rec);
    }
    if (!merged.empty()) {
      std::vector<FitnessRecord> pruned;
      for (std::size_t idx : pareto_front(merged)) {
        pruned.push_back(merged[idx]);
      }
      result.best_front = std::move(pruned);
    }
    add("hv_best", hypervolume_2d(to_points(result.best_front), ref));
  }
}

void Engine::evolve_step(Population &population, int generation,
                         RunResult &result) const {
  const int n = config_.population_size;
  const int t_add = config_.t_add;
  const auto gen_tag = static_cast<std::uint64_t>(generation);

  // 1. Mating selection.
  Rng tour_rng =
      derive_rng(config_.seed, {gen_tag, tag(StreamPhase::kTournament)});
  const std::vector<int> parents =
      tournament_select(population, config_.k_tournament, n, config_.mode,
                        tour_rng);

  // 2. Forward-noise the selected parents to t_add.
  std::vector<StateTensor> noised(n);
  parallel_for(n, [&](int i) {
    Rng rng = derive_rng(config_.seed, {gen_tag, tag(StreamPhase::kParentNoise),
                                        static_cast<std::uint64_t>(i)});
    noised[i] =
        forward_noise(population[parents[i]].state, t_add, schedule_, rng);
  });

  // 3. Crossover (plus optional fragment injection) -> N offspring.
  std::vector<StateTensor> offspring(n);
  parallel_for(n, [&](int j) {
    Rng rng = derive_rng(config_.seed, {gen_tag, tag(StreamPhase::kCrossover),
                                        static_cast<std::uint64_t>(j)});
    const StateTensor &a = noised[(2 * j) % n];
    const StateTensor &b = noised[(2 * j + 1) % n];
    StateTensor off;
    if (a.atoms() != b.atoms()) {
      const int lo = std::min(a.atoms(), b.atoms());
      const int hi = std::max(a.atoms(), b.atoms());
      const int target = rng.uniform_int(lo, hi);
      const StateTensor ra = reconcile_to_size(a, target, schedule_, rng);
      const StateTensor rb = reconcile_to_size(b, target, schedule_, rng);
      off = crossover_noised(ra, rb, config_.crossover, rng);
    } else {
      off = crossover_noised(a, b, config_.crossover, rng);
    }
    off.center();
    if (config_.fragment && config_.use_fragment_injection) {
      Rng inj_rng =
          derive_rng(config_.seed, {gen_tag, tag(StreamPhase::kInjection),
                                    static_cast<std::uint64_t>(j)});
      off = inject_fragment(off, *config_.fragment, num_types_, schedule_,
                            t_add, inj_rng);
    }
    offspring[j] = std::move(off);
  });

  // 4. Denoise noised parents and offspring (both re-enter the pool).
  std::vector<StateTensor> candidates;
  candidates.reserve(2 * static_cast<std::size_t>(n));
  for (auto &s : noised) candidates.push_back(std::move(s));
  for (auto &s : offspring) candidates.push_back(std::move(s));

  // 5. Decode + evaluate all candidates, tracking CoM drift of the raw
  // denoised states before canonicalization.
  std::vector<Individual> evaluated(candidates.size());
  std::vector<double> com_norms(candidates.size(), 0.0);
  parallel_for(static_cast<int>(candidates.size()), [&](int c) {
    Rng rng = derive_rng(config_.seed, {gen_tag, tag(StreamPhase::kDenoise),
                                        static_cast<std::uint64_t>(c)});
    const StateTensor clean = denoise_from(candidates[c], schedule_, *denoiser_,
                                           rng, config_.stochastic_denoise);
    com_norms[c] = std::max(candidates[c].com().norm(), clean.com().norm());
    evaluated[c] = make_individual(clean, generation);
  });
  result.accounting.reverse_steps +=
      static_cast<std::uint64_t>(candidates.size()) *
      static_cast<std::uint64_t>(t_add);
  result.accounting.evaluations += candidates.size();

  // 6. Environmental selection over old population + denoised parents +
  // offspring.
  Population pool = population;
  for (auto &ind : evaluated) pool.push_back(std::move(ind));

  double pool_max_com = 0.0;
  for (double v : com_norms) pool_max_com = std::max(pool_max_com, v);
  for (const auto &ind : pool) {
    pool_max_com = std::max(pool_max_com, ind.state.com().norm());
  }

  if (config_.mode == RunMode::kSingle) {
    assign_scalar_fitness(pool);
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
      const auto &fa = pool[a].fitness;
      const auto &fb = pool[b].fitness;
      if (fa.scalar_fitness != fb.scalar_fitness) {
        return fa.scalar_fitness < fb.scalar_fitness;
      }
      if (fa.cv != fb.cv) return fa.cv < fb.cv;
      if (pool[a].birth_generation != pool[b].birth_generation) {
        return pool[a].birth_generation < pool[b].birth_generation;
      }
      return a < b;
    });
    Population next;
    next.reserve(n);
    for (int i = 0; i < n; ++i) next.push_back(pool[order[i]]);
    population = std::move(next);
  } else {
    std::vector<FitnessRecord> records;
    records.reserve(pool.size());
    for (const auto &ind : pool) records.push_back(ind.fitness);
    const auto keep = spea2_environmental_select(
        records, static_cast<std::size_t>(n), config_.objective_bounds);
    const int k = std::max(
        1, static_cast<int>(std::floor(std::sqrt(
               static_cast<double>(records.size())))));
    const Spea2Assignment assign =
        spea2_assign(records, k, config_.objective_bounds);
    Population next;
    next.reserve(n);
    for (std::size_t idx : keep) {
      pool[idx].fitness.spea2_fitness = assign.fitness[idx];
      next.push_back(pool[idx]);
    }
    population = std::move(next);
  }

  record_metrics(population, generation, pool_max_com, result);
}

RunResult Engine::run(const std::optional<Checkpoint> &resume,
                      const CheckpointSink &sink,
                      const std::string &config_hash) const {
  RunResult result;
  int start_generation = 1;

  if (resume) {
    result.rows = resume->rows;
    result.population = resume->population;
    result.best_front = resume->best_front;
    result.accounting = resume->accounting;
    start_generation = resume->generation + 1;
  } else {
    result.population = initialize_population(result.accounting);
    if (config_.mode == RunMode::kSingle) {
      assign_scalar_fitness(result.population);
    } else {
      std::vector<FitnessRecord> records;
      for (const auto &ind : result.population) records.push_back(ind.fitness);
      const int k = std::max(
          1, static_cast<int>(std::floor(std::sqrt(
                 static_cast<double>(records.size())))));
      const Spea2Assignment assign =
          spea2_assign(records, k, config_.objective_bounds);
      for (std::size_t i = 0; i < result.population.size(); ++i) {
        result.population[i].fitness.spea2_fitness = assign.fitness[i];
      }
    }
    double init_com = 0.0;
    for (const auto &ind : result.population) {
      init_com = std::max(init_com, ind.state.com().norm());
    }
    record_metrics(result.population, 0, init_com, result);
    if (sink) {
      sink(Checkpoint{config_hash, 0, config_.seed, result.accounting,
                      result.rows, result.population, result.best_front});
    }
  }

  for (int g = start_generation; g <= config_.iterations; ++g) {
    evolve_step(result.population, g, result);
    if (sink) {
      sink(Checkpoint{config_hash, g, config_.seed, result.accounting,
                      result.rows, result.population, result.best_front});
    }
  }
  return result;
}

}  // namespace egd
