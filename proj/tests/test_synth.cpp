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

#include <doctest.h>

#include <cmath>
#include <random>

#include "hankel/dynamics.hpp"
#include "hankel/error.hpp"
#include "hankel/synth.hpp"
#include "hankel/synth_bench.hpp"

using namespace hankel;

namespace {

SyntheticSystem scalar_decay(std::optional<Eigen::VectorXd> x0) {
  return SyntheticSystem(Eigen::MatrixXd::Constant(1, 1, 0.9), Eigen::MatrixXd::Identity(1, 1),
                         Eigen::MatrixXd::Zero(1, 1), std::move(x0), 1.0, 5);
}

}  // namespace

TEST_CASE("noise-free system at rest stays at zero") {
  std::mt19937_64 rng(1);
  const SyntheticSystem sys =
      random_oscillatory_system(4, 3, rng).with_initial_state(Eigen::VectorXd::Zero(4));
  CHECK(synth_generate(sys, 50).samples.isZero());
}

TEST_CASE("scalar decay follows 0.9^k") {
  const TimeSeries y = synth_generate(scalar_decay(Eigen::VectorXd::Ones(1)), 30);
  for (int k = 0; k < 30; ++k) CHECK(y.samples(0, k) == doctest::Approx(std::pow(0.9, k)).epsilon(1e-12));
}

TEST_CASE("noise-free outputs have a rank-deficient Hankel matrix") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 20; ++k) {
    const SyntheticSystem sys = random_oscillatory_system(2, 4, rng);
    const HankelMatrix h = build_hankel(synth_generate(sys, 25), SystemOrder(3));
    const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(h.values()).singularValues();
    CHECK(sv(2) / sv(0) < 1e-8);
  }
}

TEST_CASE("oscillatory systems respect the requested pole ranges") {
  std::mt19937_64 rng(3);
  for (int u : {1, 2, 3, 4, 5}) {
    const SyntheticSystem sys = random_oscillatory_system(u, 2, rng);
    const Eigen::VectorXcd poles = Eigen::EigenSolver<Eigen::MatrixXd>(sys.state_matrix()).eigenvalues();
    for (Eigen::Index i = 0; i < poles.size(); ++i) {
      CHECK(std::abs(poles(i)) >= 0.97 - 1e-9);
      CHECK(std::abs(poles(i)) <= 0.99 + 1e-9);
    }
    CHECK(spectral_radius(sys.state_matrix()) <= kMaxSpectralRadius + 1e-12);
  }
}

TEST_CASE("unstable or malformed systems are rejected") {
  try {
    SyntheticSystem(Eigen::MatrixXd::Constant(1, 1, 1.01), Eigen::MatrixXd::Identity(1, 1),
                    Eigen::MatrixXd::Zero(1, 1), std::nullopt, 1.0, 0);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnstableSystem);
  }
  CHECK_THROWS_AS(SyntheticSystem(Eigen::MatrixXd::Identity(2, 2) * 0.5, Eigen::MatrixXd::Identity(1, 3),
                                  Eigen::MatrixXd::Zero(2, 2), std::nullopt, 1.0, 0),
                  Error);
  Eigen::MatrixXd not_psd = Eigen::MatrixXd::Identity(2, 2);
  not_psd(1, 1) = -1.0;
  CHECK_THROWS_AS(SyntheticSystem(Eigen::MatrixXd::Identity(2, 2) * 0.5, Eigen::MatrixXd::Identity(2, 2),
                                  not_psd, std::nullopt, 1.0, 0),
                  Error);
}

TEST_CASE("generation is reproducible per seed") {
  std::mt19937_64 rng(9);
  const SyntheticSystem sys =
      random_oscillatory_system(3, 2, rng).with_noise(Eigen::MatrixXd::Identity(3, 3) * 0.04);
  CHECK(synth_generate(sys, 40).samples == synth_generate(sys, 40).samples);
  CHECK(synth_generate(sys, 40).samples != synth_generate(sys.with_seed(sys.seed() + 1), 40).samples);
}

TEST_CASE("time warp keeps frame order") {
  std::mt19937_64 rng(31);
  TimeSeries ramp{Eigen::MatrixXd(1, 40)};
  for (int t = 0; t < 40; ++t) ramp.samples(0, t) = t;
  for (int k = 0; k < 50; ++k) {
    const TimeSeries w = random_time_warp(ramp, 10, 0.2, rng);
    REQUIRE(w.length() >= 30);
    CHECK(w.samples(0, 0) <= 10);
    CHECK(w.samples(0, w.length() - 1) == 39);
    for (int t = 1; t < w.length(); ++t) {
      const double step = w.samples(0, t) - w.samples(0, t - 1);
      CHECK((step == 0.0 || step == 1.0));
    }
  }
}

TEST_CASE("synthetic benchmark dataset") {
  SynthBenchSpec spec;
  spec.subjects = 4;
  const FeatureDataset data = make_synthetic_dataset(spec, 0.1, 17);
  REQUIRE(data.sequences.size() == 12);
  CHECK(data.labels.size() == 3);
  for (const auto& s : data.sequences) {
    REQUIRE(s.channels.size() == 3);
    for (const auto& c : s.channels) {
      CHECK(c.series.dim() == 3);
      CHECK(c.series.length() >= spec.length_min);
      CHECK(c.series.length() <= spec.length_max);
    }
  }
  CHECK(data.sequences[0].channels[1].key == synthetic_channel_key(1));
  const FeatureDataset again = make_synthetic_dataset(spec, 0.1, 17);
  CHECK(again.sequences[5].channels[2].series.samples == data.sequences[5].channels[2].series.samples);
}

TEST_CASE("benchmark spec json") {
  SynthBenchSpec spec;
  spec.classes = 4;
  spec.time_warp = true;
  spec.noise_levels = {0.0, 0.25};
  const SynthBenchSpec back = SynthBenchSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK_THROWS_AS(SynthBenchSpec::from_json({{"clases", 3}}), Error);
  nlohmann::json bad = spec.to_json();
  bad["radius_max"] = 1.2;
  CHECK_THROWS_AS(SynthBenchSpec::from_json(bad), Error);
}
