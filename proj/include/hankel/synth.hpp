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

#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "hankel/time_series.hpp"

namespace hankel {

inline constexpr double kMaxSpectralRadius = 0.99;

double spectral_radius(const Eigen::MatrixXd& a);

/// Linear time-invariant system x_{k+1} = A x_k + w_k, y_k = C x_k with
/// w_k ~ N(0, Q). The initial state is either fixed or drawn from
/// N(0, initial_stddev^2 I). All randomness derives from `seed`.
class SyntheticSystem {
 public:
  SyntheticSystem(Eigen::MatrixXd state, Eigen::MatrixXd output, Eigen::MatrixXd noise_cov,
                  std::optional<Eigen::VectorXd> initial_state, double initial_stddev,
                  std::uint64_t seed);

  int state_dim() const { return static_cast<int>(state_.rows()); }
  int output_dim() const { return static_cast<int>(output_.rows()); }
  const Eigen::MatrixXd& state_matrix() const { return state_; }
  const Eigen::MatrixXd& output_matrix() const { return output_; }
  const Eigen::MatrixXd& noise_covariance() const { return noise_cov_; }
  const std::optional<Eigen::VectorXd>& initial_state() const { return initial_state_; }
  double initial_stddev() const { return initial_stddev_; }
  std::uint64_t seed() const { return seed_; }

  SyntheticSystem with_seed(std::uint64_t seed) const;
  SyntheticSystem with_noise(Eigen::MatrixXd noise_cov) const;
  SyntheticSystem with_output(Eigen::MatrixXd output) const;
  SyntheticSystem with_initial_state(std::optional<Eigen::VectorXd> x0) const;

 private:
  Eigen::MatrixXd state_;
  Eigen::MatrixXd output_;
  Eigen::MatrixXd noise_cov_;
  Eigen::MatrixXd noise_factor_;  // L with L L^T = Q
  std::optional<Eigen::VectorXd> initial_state_;
  double initial_stddev_;
  std::uint64_t seed_;

  friend TimeSeries synth_generate(const SyntheticSystem& system, int length);
};

/// Simulates `length` outputs y_0 .. y_{length-1}; reproducible per seed.
TimeSeries synth_generate(const SyntheticSystem& system, int length);

/// Ranges for random_oscillatory_system.
struct OscillatorRanges {
  double radius_min = 0.97;
  double radius_max = 0.99;
  double angle_min = 2.0 * 3.14159265358979323846 / 6.0;
  double angle_max = 2.0 * 3.14159265358979323846 / 3.0;
};

/// Random stable system whose state matrix is a block diagonal of damped
/// rotations (plus one real pole when state_dim is odd) expressed in a random
/// orthonormal basis; C has standard normal entries. Noise-free, initial
/// state drawn from N(0, I).
SyntheticSystem random_oscillatory_system(int state_dim, int output_dim, std::mt19937_64& rng,
                                          const OscillatorRanges& ranges = {});

/// Non-uniform time warp that keeps frame order: drops a random onset of up
/// to `max_onset` frames, then repeats each remaining frame with probability
/// `repeat_prob`.
TimeSeries random_time_warp(const TimeSeries& series, int max_onset, double repeat_prob,
                            std::mt19937_64& rng);

}  // namespace hankel
