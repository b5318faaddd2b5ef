//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_DENOISER_HPP
#define EGD_DENOISER_HPP

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "egd/rng.hpp"
#include "egd/schedule.hpp"
#include "egd/state.hpp"

namespace egd {

/// Clean-state estimator E[M_0 | M_t]. Implementations must be safely
/// shareable across concurrent workers (read-only after construction).
class Denoiser {
public:
  virtual ~Denoiser() = default;

  virtual StateTensor posterior_mean(const StateTensor &state,
                                     const NoiseSchedule &schedule) const = 0;

  /// Whether the denoiser can start from any step t (all current ones can).
  virtual bool supports_partial() const { return true; }
};

/// Bayes-optimal posterior mean over an empirical reference distribution:
/// sum_j w_j M_j with w_j proportional to
/// exp(-|state - sqrt(ab_t) M_j|^2 / (2 (1 - ab_t))), computed through a
/// log-sum-exp stabilized reduction. All entries must share the query shape.
StateTensor empirical_posterior_mean(const StateTensor &state_t,
                                     const NoiseSchedule &schedule,
                                     const std::vector<StateTensor> &dataset);

/// Posterior weights for the same mixture; exposed for stability tests.
Eigen::VectorXd empirical_posterior_weights(
    const StateTensor &state_t, const NoiseSchedule &schedule,
    const std::vector<StateTensor> &dataset);

/// Empirical denoiser over a reference set of clean states. Entries are
/// grouped by atom count; a query of size n sees only the size-n group, and
/// construction requires the covered sizes to form a contiguous range so that
/// crossover size reconciliation can never produce an unservable size.
class EmpiricalDenoiser final : public Denoiser {
public:
  explicit EmpiricalDenoiser(std::vector<StateTensor> dataset);

  StateTensor posterior_mean(const StateTensor &state,
                             const NoiseSchedule &schedule) const override;

  const std::vector<StateTensor> &dataset() const { return dataset_; }
  int min_atoms() const { return min_atoms_; }
  int max_atoms() const { return max_atoms_; }
  int feat_dim() const { return feat_dim_; }

  /// Number of reference entries with the given atom count.
  int group_size(int atoms) const;

private:
  struct Group {
    Eigen::MatrixXd flat;          // K x n(3+d), one row per entry
    Eigen::VectorXd sq_norms;      // |row|^2
    std::vector<int> entry_index;  // into dataset_
  };

  const Group &group_for(int atoms) const;

  std::vector<StateTensor> dataset_;
  std::map<int, Group> groups_;
  int min_atoms_ = 0;
  int max_atoms_ = 0;
  int feat_dim_ = 0;
};

/// Ancestral reverse sampling from state.t down to 0. Per-step mean follows
/// the DDPM posterior with eps recovered from the denoiser's posterior mean;
/// stochastic mode injects sqrt(beta_t)-scaled noise at every step except the
/// last, with the coordinate block projected CoM-free.
StateTensor denoise_from(const StateTensor &state_t,
                         const NoiseSchedule &schedule,
                         const Denoiser &denoiser, Rng &rng, bool stochastic);

}  // namespace egd

#endif  // EGD_DENOISER_HPP
