//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "egd/denoiser.hpp"

#include <cmath>
#include <string>

#include "egd/error.hpp"

namespace egd {

namespace {

Eigen::VectorXd flatten(const StateTensor &s) {
  const int n = s.atoms();
  const int d = s.feat_dim();
  Eigen::VectorXd v(n * (3 + d));
  v.head(n * 3) = Eigen::Map<const Eigen::VectorXd>(s.coords.data(), n * 3);
  v.tail(n * d) = Eigen::Map<const Eigen::VectorXd>(s.feats.data(), n * d);
  return v;
}

void check_query(const StateTensor &state_t, const NoiseSchedule &schedule) {
  if (state_t.t < 1) {
    throw Error("posterior_mean: state must be at t >= 1, got t = " +
                std::to_string(state_t.t));
  }
  if (state_t.t > schedule.steps()) {
    throw Error("posterior_mean: state.t exceeds schedule length");
  }
}

}  // namespace

Eigen::VectorXd empirical_posterior_weights(
    const StateTensor &state_t, const NoiseSchedule &schedule,
    const std::vector<StateTensor> &dataset) {
  check_query(state_t, schedule);
  if (dataset.empty()) throw Error("posterior_mean: empty dataset");
  for (const auto &entry : dataset) {
    if (!entry.same_shape(state_t)) {
      throw Error("posterior_mean: dataset entry shape mismatch");
    }
  }

  const double ab = schedule.alpha_bar(state_t.t);
  const double scale = std::sqrt(ab);
  const double var = 1.0 - ab;

  const Eigen::Index k = static_cast<Eigen::Index>(dataset.size());
  Eigen::VectorXd logits(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double sq = (state_t.coords - scale * dataset[j].coords)
                          .squaredNorm() +
                      (state_t.feats - scale * dataset[j].feats).squaredNorm();
    logits[j] = -sq / (2.0 * var);
  }
  const double max_logit = logits.maxCoeff();
  const Eigen::VectorXd shifted = (logits.array() - max_logit).exp();
  return shifted / shifted.sum();
}

StateTensor empirical_posterior_mean(const StateTensor &state_t,
                                     const NoiseSchedule &schedule,
                                     const std::vector<StateTensor> &dataset) {
  const Eigen::VectorXd w =
      empirical_posterior_weights(state_t, schedule, dataset);
  StateTensor out;
  out.coords = Eigen::MatrixXd::Zero(state_t.atoms(), 3);
  out.feats = Eigen::MatrixXd::Zero(state_t.atoms(), state_t.feat_dim());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    out.coords += w[j] * dataset[j].coords;
    out.feats += w[j] * dataset[j].feats;
  }
  out.t = 0;
  return out;
}

EmpiricalDenoiser::EmpiricalDenoiser(std::vector<StateTensor> dataset)
    : dataset_(std::move(dataset)) {
  if (dataset_.empty()) throw ConfigError("EmpiricalDenoiser: empty dataset");
  feat_dim_ = dataset_[0].feat_dim();
  min_atoms_ = dataset_[0].atoms();
  max_atoms_ = min_atoms_;

  std::map<int, std::vector<int>> by_size;
  for (std::size_t i = 0; i < dataset_.size(); ++i) {
    const auto &entry = dataset_[i];
    if (entry.t != 0) throw ConfigError("EmpiricalDenoiser: entries must be clean");
    if (entry.feat_dim() != feat_dim_) {
      throw ConfigError("EmpiricalDenoiser: inconsistent feature dimension");
    }
    min_atoms_ = std::min(min_atoms_, entry.atoms());
    max_atoms_ = std::max(max_atoms_, entry.atoms());
    by_size[entry.atoms()].push_back(static_cast<int>(i));
  }
  for (int n = min_atoms_; n <= max_atoms_; ++n) {
    if (!by_size.count(n)) {
      throw ConfigError(
          "EmpiricalDenoiser: dataset sizes must form a contiguous range; "
          "missing n = " +
          std::to_string(n));
    }
  }

  for (auto &[n, idx] : by_size) {
    Group g;
    const int dim = n * (3 + feat_dim_);
    g.flat.resize(static_cast<Eigen::Index>(idx.size()), dim);
    g.sq_norms.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      g.flat.row(static_cast<Eigen::Index>(r)) =
          flatten(dataset_[idx[r]]).transpose();
      g.sq_norms[static_cast<Eigen::Index>(r)] =
          g.flat.row(static_cast<Eigen::Index>(r)).squaredNorm();
    }
    g.entry_index = std::move(idx);
    groups_.emplace(n, std::move(g));
  }
}

int EmpiricalDenoiser::group_size(int atoms) const {
  auto it = groups_.find(atoms);
  return it == groups_.end() ? 0
                             : static_cast<int>(it->second.entry_index.size());
}

const EmpiricalDenoiser::Group &EmpiricalDenoiser::group_for(int atoms) const {
  auto it = groups_.find(atoms);
  if (it == groups_.end()) {
    throw Error("EmpiricalDenoiser: no reference entries with n = " +
                std::to_string(atoms));
  }
  return it->second;
}

StateTensor EmpiricalDenoiser::posterior_mean(
    const StateTensor &state, const NoiseSchedule &schedule) const {
  check_query(state, schedule);
  if (state.feat_dim() != feat_dim_) {
    throw Error("EmpiricalDenoiser: feature dimension mismatch");
  }
  const Group &g = group_for(state.atoms());

  const double ab = schedule.alpha_bar(state.t);
  const double scale = std::sqrt(ab);
  const double var = 1.0 - ab;

  // |q - s d_j|^2 = |q|^2 - 2 s <d_j, q> + s^2 |d_j|^2, one GEMV for the dot
  // products and one for the weighted sum.
  const Eigen::VectorXd q = flatten(state);
  const Eigen::VectorXd dots = g.flat * q;
  Eigen::VectorXd logits =
      -(q.squaredNorm() - 2.0 * scale * dots.array() +
        ab * g.sq_norms.array()) /
      (2.0 * var);
  const double max_logit = logits.maxCoeff();
  Eigen::VectorXd w = (logits.array() - max_logit).exp();
  w /= w.sum();

  const Eigen::VectorXd mean = g.flat.transpose() * w;
  const int n = state.atoms();
  StateTensor out;
  out.coords = Eigen::Map<const Eigen::MatrixXd>(mean.data(), n, 3);
  out.feats = Eigen::Map<const Eigen::MatrixXd>(mean.data() + n * 3, n,
                                                feat_dim_);
  out.t = 0;
  return out;
}

StateTensor denoise_from(const StateTensor &state_t,
                         const NoiseSchedule &schedule,
                         const Denoiser &denoiser, Rng &rng, bool stochastic) {
  if (state_t.t < 1 || state_t.t > schedule.steps()) {
    throw Error("denoise_from: state.t " + std::to_string(state_t.t) +
                " outside [1, " + std::to_string(schedule.steps()) + "]");
  }

  StateTensor cur = state_t;
  for (int t = state_t.t; t >= 1; --t) {
    cur.t = t;
    const StateTensor m0 = denoiser.posterior_mean(cur, schedule);

    const double ab = schedule.alpha_bar(t);
    const double beta = schedule.beta(t);
    const double alpha = schedule.alpha(t);
    const double sq1mab = std::sqrt(1.0 - ab);

    // eps_hat = (M_t - sqrt(ab) M0) / sqrt(1 - ab); mean per the reverse
    // posterior N((M_t - beta/sqrt(1-ab) eps_hat)/sqrt(alpha), beta I).
    const Eigen::MatrixXd eps_x =
        (cur.coords - std::sqrt(ab) * m0.coords) / sq1mab;
    const Eigen::MatrixXd eps_h =
        (cur.feats - std::sqrt(ab) * m0.feats) / sq1mab;

    cur.coords = (cur.coords - beta / sq1mab * eps_x) / std::sqrt(alpha);
    cur.feats = (cur.feats - beta / sq1mab * eps_h) / std::sqrt(alpha);

    if (t > 1 && stochastic) {
      Eigen::MatrixXd nx = gaussian_matrix(cur.atoms(), 3, rng);
      project_com_free(nx);
      Eigen::MatrixXd nh = gaussian_matrix(cur.atoms(), cur.feat_dim(), rng);
      const double sd = std::sqrt(beta);
      cur.coords += sd * nx;
      cur.feats += sd * nh;
    }
  }
  cur.t = 0;
  return cur;
}

}  // namespace egd
