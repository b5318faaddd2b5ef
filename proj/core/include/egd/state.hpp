//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_STATE_HPP
#define EGD_STATE_HPP

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "egd/rng.hpp"
#include "egd/schedule.hpp"

namespace egd {

/// Diffused molecule representation: n x 3 coordinates plus n x d feature
/// rows (one-hot at t = 0, real-valued once noised). t tracks the current
/// diffusion step, 0 = clean.
struct StateTensor {
  Eigen::MatrixXd coords;  // n x 3
  Eigen::MatrixXd feats;   // n x d
  int t = 0;

  int atoms() const { return static_cast<int>(coords.rows()); }
  int feat_dim() const { return static_cast<int>(feats.cols()); }

  Eigen::RowVector3d com() const { return coords.colwise().mean(); }

  /// Projects coordinates onto the zero-center-of-mass subspace.
  void center() { coords.rowwise() -= com(); }

  bool is_finite() const {
    return coords.allFinite() && feats.allFinite();
  }

  bool same_shape(const StateTensor &other) const {
    return coords.rows() == other.coords.rows() &&
           feats.cols() == other.feats.cols();
  }

  nlohmann::json to_json() const;
  static StateTensor from_json(const nlohmann::json &j);
};

/// Per-axis mean removal applied to a coordinate noise block, so centered
/// inputs stay centered through noising.
void project_com_free(Eigen::MatrixXd &coord_noise);

/// Closed-form forward noising q(M_t | M_0) = N(sqrt(ab) M_0, (1 - ab) I)
/// with the coordinate noise projected to the CoM-free subspace.
StateTensor forward_noise(const StateTensor &state0, int t_add,
                          const NoiseSchedule &schedule, Rng &rng);

/// Same, with caller-supplied noise blocks (projection still applied to the
/// coordinate block). Used by tests that need the exact draw.
StateTensor forward_noise_with(const StateTensor &state0, int t_add,
                               const NoiseSchedule &schedule,
                               Eigen::MatrixXd coord_noise,
                               const Eigen::MatrixXd &feat_noise);

Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng &rng);

}  // namespace egd

#endif  // EGD_STATE_HPP
