//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/state.hpp"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "egd/error.hpp"

namespace egd {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd &m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json &j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = j.at(i).at(c).get<double>();
    }
  }
  return m;
}

}  // namespace

nlohmann::json StateTensor::to_json() const {
  return nlohmann::json{{"coords", matrix_to_json(coords)},
                        {"feats", matrix_to_json(feats)},
                        {"t", t}};
}

StateTensor StateTensor::from_json(const nlohmann::json &j) {
  StateTensor s;
  s.coords = matrix_from_json(j.at("coords"));
  s.feats = matrix_from_json(j.at("feats"));
  s.t = j.at("t").get<int>();
  return s;
}

void project_com_free(Eigen::MatrixXd &coord_noise) {
  coord_noise.rowwise() -= coord_noise.colwise().mean().eval();
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng &rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

StateTensor forward_noise_with(const StateTensor &state0, int t_add,
                               const NoiseSchedule &schedule,
                               Eigen::MatrixXd coord_noise,
                               const Eigen::MatrixXd &feat_noise) {
  if (t_add < 0 || t_add > schedule.steps()) {
    throw Error("forward_noise: t_add " + std::to_string(t_add) +
                " outside [0, " + std::to_string(schedule.steps()) + "]");
  }
  if (state0.t != 0) throw Error("forward_noise: input must be at t = 0");
  if (t_add == 0) return state0;

  project_com_free(coord_noise);
  const double ab = schedule.alpha_bar(t_add);
  const double signal = std::sqrt(ab);
  const double noise = std::sqrt(1.0 - ab);

  StateTensor out;
  out.coords = signal * state0.coords + noise * coord_noise;
  out.feats = signal * state0.feats + noise * feat_noise;
  out.t = t_add;
  return out;
}

StateTensor forward_noise(const StateTensor &state0, int t_add,
                          const NoiseSchedule &schedule, Rng &rng) {
  if (t_add < 0 || t_add > schedule.steps()) {
    throw Error("forward_noise: t_add " + std::to_string(t_add) +
                " outside [0, " + std::to_string(schedule.steps()) + "]");
  }
  if (state0.t != 0) throw Error("forward_noise: input must be at t = 0");
  if (t_add == 0) return state0;
  Eigen::MatrixXd eps_x = gaussian_matrix(state0.atoms(), 3, rng);
  Eigen::MatrixXd eps_h =
      gaussian_matrix(state0.atoms(), state0.feat_dim(), rng);
  return forward_noise_with(state0, t_add, schedule, std::move(eps_x), eps_h);
}

}  // namespace egd
