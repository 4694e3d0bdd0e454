// Copyright 2026 The Hankel Dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hankel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hankel/error.hpp"

namespace hankel {
namespace {

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& q) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
  const Eigen::VectorXd eig = solver.eigenvalues();
  if (eig.minCoeff() < -1e-12 * std::max(1.0, eig.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInvalidArgument, "noise covariance is not positive semidefinite");
  }
  return solver.eigenvectors() * eig.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Eigen::MatrixXd normal_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "spectral radius needs a square matrix");
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SyntheticSystem::SyntheticSystem(Eigen::MatrixXd state, Eigen::MatrixXd output,
                                 Eigen::MatrixXd noise_cov,
                                 std::optional<Eigen::VectorXd> initial_state,
                                 double initial_stddev, std::uint64_t seed)
    : state_(std::move(state)),
      output_(std::move(output)),
      noise_cov_(std::move(noise_cov)),
      initial_state_(std::move(initial_state)),
      initial_stddev_(initial_stddev),
      seed_(seed) {
  const Eigen::Index u = state_.rows();
  if (u < 1 || state_.cols() != u) {
    throw Error(ErrorCode::kInvalidArgument, "state matrix must be square and non-empty");
  }
  if (output_.rows() < 1 || output_.cols() != u) {
    throw Error(ErrorCode::kInvalidArgument, "output matrix must have state_dim columns");
  }
  if (noise_cov_.rows() != u || noise_cov_.cols() != u) {
    throw Error(ErrorCode::kInvalidArgument, "noise covariance must be state_dim x state_dim");
  }
  if (initial_state_ && initial_state_->size() != u) {
    throw Error(ErrorCode::kInvalidArgument, "initial state has the wrong dimension");
  }
  if (!(initial_stddev_ >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "initial-state deviation must be non-negative");
  }
  const double radius = spectral_radius(state_);
  if (!(radius <= kMaxSpectralRadius)) {
    throw Error(ErrorCode::kUnstableSystem,
                "state matrix spectral radius " + std::to_string(radius) + " exceeds " +
                    std::to_string(kMaxSpectralRadius));
  }
  noise_factor_ = covariance_factor(noise_cov_);
}

SyntheticSystem SyntheticSystem::with_seed(std::uint64_t seed) const {
  SyntheticSystem copy = *this;
  copy.seed_ = seed;
  return copy;
}

SyntheticSystem SyntheticSystem::with_noise(Eigen::MatrixXd noise_cov) const {
  return SyntheticSystem(state_, output_, std::move(noise_cov), initial_state_, initial_stddev_,
                         seed_);
}

SyntheticSystem SyntheticSystem::with_output(Eigen::MatrixXd output) const {
  return SyntheticSystem(state_, std::move(output), noise_cov_, initial_state_, initial_stddev_,
                         seed_);
}

SyntheticSystem SyntheticSystem::with_initial_state(std::optional<Eigen::VectorXd> x0) const {
  return SyntheticSystem(state_, output_, noise_cov_, std::move(x0), initial_stddev_, seed_);
}

TimeSeries synth_generate(const SyntheticSystem& system, int length) {
  if (length < 1) throw Error(ErrorCode::kInvalidArgument, "synthetic length must be positive");
  std::mt19937_64 rng(system.seed_);
  std::normal_distribution<double> normal;
  const int u = system.state_dim();
  Eigen::VectorXd x(u);
  if (system.initial_state_) {
    x = *system.initial_state_;
  } else {
    for (int i = 0; i < u; ++i) x(i) = system.initial_stddev_ * normal(rng);
  }
  const bool noisy = system.noise_factor_.cwiseAbs().maxCoeff() > 0.0;
  Eigen::MatrixXd outputs(system.output_dim(), length);
  Eigen::VectorXd w(u);
  for (int k = 0; k < length; ++k) {
    outputs.col(k) = system.output_ * x;
    x = system.state_ * x;
    if (noisy) {
      for (int i = 0; i < u; ++i) w(i) = normal(rng);
      x += system.noise_factor_ * w;
    }
  }
  return TimeSeries(std::move(outputs));
}

SyntheticSystem random_oscillatory_system(int state_dim, int output_dim, std::mt19937_64& rng,
                                          const OscillatorRanges& ranges) {
  if (state_dim < 1 || output_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "system dimensions must be positive");
  }
  if (!(0.0 < ranges.radius_min && ranges.radius_min <= ranges.radius_max &&
        ranges.radius_max <= kMaxSpectralRadius)) {
    throw Error(ErrorCode::kUnstableSystem, "oscillator radius range must lie in (0, 0.99]");
  }
  std::uniform_real_distribution<double> radius(ranges.radius_min, ranges.radius_max);
  std::uniform_real_distribution<double> angle(ranges.angle_min, ranges.angle_max);
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(state_dim, state_dim);
  int i = 0;
  for (; i + 1 < state_dim; i += 2) {
    const double r = radius(rng);
    const double theta = angle(rng);
    block(i, i) = r * std::cos(theta);
    block(i, i + 1) = -r * std::sin(theta);
    block(i + 1, i) = r * std::sin(theta);
    block(i + 1, i + 1) = r * std::cos(theta);
  }
  if (i < state_dim) block(i, i) = radius(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal_matrix(state_dim, state_dim, rng));
  const Eigen::MatrixXd basis = qr.householderQ();
  Eigen::MatrixXd a = basis * block * basis.transpose();
  Eigen::MatrixXd c = normal_matrix(output_dim, state_dim, rng);
  const std::uint64_t seed = rng();
  return SyntheticSystem(std::move(a), std::move(c),
                         Eigen::MatrixXd::Zero(state_dim, state_dim), std::nullopt, 1.0, seed);
}

TimeSeries random_time_warp(const TimeSeries& series, int max_onset, double repeat_prob,
                            std::mt19937_64& rng) {
  if (max_onset < 0 || max_onset >= series.length()) {
    throw Error(ErrorCode::kInvalidArgument, "time-warp onset must leave at least one frame");
  }
  if (!(repeat_prob >= 0.0 && repeat_prob < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "repeat probability must lie in [0, 1)");
  }
  std::uniform_int_distribution<int> onset_dist(0, max_onset);
  std::bernoulli_distribution repeat(repeat_prob);
  std::vector<int> index;
  for (int k = onset_dist(rng); k < series.length(); ++k) {
    index.push_back(k);
    if (repeat(rng)) index.push_back(k);
  }
  Eigen::MatrixXd out(series.dim(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t k = 0; k < index.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = series.samples.col(index[k]);
  }
  return TimeSeries(std::move(out));
}

}  // namespace hankel
