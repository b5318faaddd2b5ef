//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_EVOLUTION_HPP
#define EGD_EVOLUTION_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "egd/denoiser.hpp"
#include "egd/fitness.hpp"
#include "egd/fragment.hpp"
#include "egd/molecule.hpp"
#include "egd/objective.hpp"
#include "egd/rng.hpp"
#include "egd/schedule.hpp"

namespace egd {

enum class RunMode { kSingle, kMulti };
enum class CrossoverOp { kUniformMask, kBlend };
enum class InitMode { kDenoise, kDataset };

struct RunConfig {
  int population_size = 32;  // N
  int iterations = 10;       // R
  int t_add = 200;
  int k_tournament = 2;
  RunMode mode = RunMode::kSingle;
  CrossoverOp crossover = CrossoverOp::kUniformMask;
  InitMode init = InitMode::kDenoise;
  bool stochastic_denoise = true;
  bool use_fragment_injection = true;
  int archive_size = 0;  // 0 -> population_size
  std::uint64_t seed = 0;
  ObjectiveSpec objective;
  std::optional<Fragment> fragment;
  // Per-objective (min, max) used to normalize densities and hypervolume.
  std::vector<std::pair<double, double>> objective_bounds;

  void validate(int schedule_steps) const;
};

struct Individual {
  StateTensor state;  // canonical clean form: centered coords, one-hot feats
  Molecule molecule;  // decode(state) cache
  FitnessRecord fitness;
  int birth_generation = 0;
};

using Population = std::vector<Individual>;

struct MetricRow {
  int generation = 0;
  std::string metric;
  double value = 0.0;
};

struct Accounting {
  std::uint64_t reverse_steps = 0;
  std::uint64_t evaluations = 0;
};

struct RunResult {
  std::vector<MetricRow> rows;
  Population population;
  std::vector<FitnessRecord> best_front;  // accumulated, multi mode
  Accounting accounting;

  int generations_recorded() const;
  double metric(int generation, const std::string &name) const;
  /// Lowest raw target error in the final population (single mode).
  double final_best_mae() const;
};

/// Engine state written after every generation; (seed, generation) fully
/// determine the continuation streams, so resume is bit-identical.
struct Checkpoint {
  std::string config_hash;
  int generation = 0;
  std::uint64_t seed = 0;
  Accounting accounting;
  std::vector<MetricRow> rows;
  Population population;
  std::vector<FitnessRecord> best_front;
};

using CheckpointSink = std::function<void(const Checkpoint &)>;

// ---- Operators (free functions, used by the engine and tested directly) ----

/// `count` winners of k uniform draws with replacement; the winner is the
/// lowest scalar fitness (single) or spea2 fitness (multi), ties to the lower
/// population index. Returns population indices.
std::vector<int> tournament_select(const Population &population, int k,
                                   int count, RunMode mode, Rng &rng);

/// Row mix by explicit mask (true = take the row from a).
StateTensor uniform_mask_crossover(const StateTensor &a, const StateTensor &b,
                                   const std::vector<bool> &take_a);

/// Crossover of two same-shape states at the same t_add. uniform_mask draws a
/// Bernoulli(1/2) row mask; blend draws one uniform(0,1) weight per offspring.
StateTensor crossover_noised(const StateTensor &a, const StateTensor &b,
                             CrossoverOp op, Rng &rng);

/// Reconciles two noised parents to a common atom count: the larger is
/// truncated to the rows nearest its centroid, the smaller padded by cycled
/// duplicate rows plus a fresh sqrt(1 - alpha_bar(t)) noise draw; coords are
/// re-centered.
StateTensor reconcile_to_size(const StateTensor &parent, int target_atoms,
                              const NoiseSchedule &schedule, Rng &rng);

/// Forward-noises the fragment to t_add and overwrites a random contiguous
/// row block of the offspring, rigidly translating the noised fragment so the
/// block centroids match. zero_noise substitutes a zero draw (test mode).
StateTensor inject_fragment(const StateTensor &offspring_t,
                            const Fragment &fragment, int num_types,
                            const NoiseSchedule &schedule, int t_add, Rng &rng,
                            bool zero_noise = false);

/// SPEA2 environmental selection: keep F < 1; truncate by the sigma-distance
/// lexicographic profile on overflow, fill with the best dominated F on
/// underflow. Returns indices into `records`, stable where applicable.
std::vector<std::size_t> spea2_environmental_select(
    const std::vector<FitnessRecord> &records, std::size_t n_keep,
    const std::optional<std::vector<std::pair<double, double>>> &bounds);

// ---- Engine ----

class Engine {
public:
  /// `reference` backs dataset-mode initialization and the atom-count
  /// distribution of denoise-mode initialization. It is usually the denoiser's
  /// reference set.
  Engine(NoiseSchedule schedule, std::shared_ptr<const Denoiser> denoiser,
         TypeRules rules, std::vector<StateTensor> reference, RunConfig config);

  const RunConfig &config() const { return config_; }
  const NoiseSchedule &schedule() const { return schedule_; }

  Population initialize_population(Accounting &accounting) const;

  /// One full generation (Alg. selection -> noise -> crossover -> denoise ->
  /// evaluate -> environmental selection). Appends metric rows for `generation`
  /// and updates the accounting and best-front accumulator.
  void evolve_step(Population &population, int generation,
                   RunResult &result) const;

  RunResult run(const std::optional<Checkpoint> &resume = {},
                const CheckpointSink &sink = {},
                const std::string &config_hash = "") const;

private:
  Individual make_individual(const StateTensor &clean, int generation) const;
  void assign_scalar_fitness(Population &pool) const;
  void record_metrics(const Population &population, int generation,
                      double pool_max_com, RunResult &result) const;

  NoiseSchedule schedule_;
  std::shared_ptr<const Denoiser> denoiser_;
  TypeRules rules_;
  std::vector<StateTensor> reference_;
  RunConfig config_;
  int num_types_;
};

}  // namespace egd

#endif  // EGD_EVOLUTION_HPP
