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

#include <random>
#include <sstream>

#include "hankel/cache.hpp"
#include "hankel/error.hpp"
#include "hankel/hashing.hpp"
#include "hankel/synth_bench.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hankel;

namespace {

FeatureDataset sample_dataset() {
  SynthBenchSpec spec;
  spec.subjects = 3;
  return make_synthetic_dataset(spec, 0.2, 99);
}

void check_same(const FeatureDataset& a, const FeatureDataset& b) {
  CHECK(a.labels == b.labels);
  CHECK(a.degenerate_windows == b.degenerate_windows);
  REQUIRE(a.sequences.size() == b.sequences.size());
  for (std::size_t s = 0; s < a.sequences.size(); ++s) {
    CHECK(a.sequences[s].id == b.sequences[s].id);
    CHECK(a.sequences[s].subject == b.sequences[s].subject);
    CHECK(a.sequences[s].label == b.sequences[s].label);
    REQUIRE(a.sequences[s].channels.size() == b.sequences[s].channels.size());
    for (std::size_t c = 0; c < a.sequences[s].channels.size(); ++c) {
      CHECK(a.sequences[s].channels[c].key == b.sequences[s].channels[c].key);
      CHECK(a.sequences[s].channels[c].series.samples == b.sequences[s].channels[c].series.samples);
    }
  }
}

ErrorCode read_code(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_feature_cache(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("corrupt cache was accepted");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("feature cache round trip is bit-exact") {
  const FeatureDataset data = sample_dataset();
  std::ostringstream out;
  write_feature_cache(out, data, "abc123");
  std::istringstream in(out.str());
  const FeatureCache back = read_feature_cache(in);
  CHECK(back.key == "abc123");
  check_same(data, back.dataset);

  std::ostringstream again;
  write_feature_cache(again, back.dataset, back.key);
  CHECK(again.str() == out.str());
}

TEST_CASE("feature cache files") {
  testing::TempDir dir("cache");
  const FeatureDataset data = sample_dataset();
  const auto path = dir.path() / "sub" / "features.bin";
  save_feature_cache(path, data, "k1");
  CHECK(peek_feature_cache_key(path) == "k1");
  CHECK_FALSE(peek_feature_cache_key(dir.path() / "absent.bin").has_value());
  check_same(data, load_feature_cache(path).dataset);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".partial"));
}

TEST_CASE("corrupt feature caches are rejected") {
  std::ostringstream out;
  write_feature_cache(out, sample_dataset(), "key");
  const std::string good = out.str();
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(read_code(bad_magic) == ErrorCode::kFormat);
  CHECK(read_code(good.substr(0, good.size() / 2)) == ErrorCode::kFormat);
  CHECK(read_code(good.substr(0, 5)) == ErrorCode::kFormat);
  std::string bad_version = good;
  bad_version[8] = 7;
  CHECK(read_code(bad_version) == ErrorCode::kFormat);
}

TEST_CASE("ensemble round trip is bit-exact") {
  std::mt19937_64 rng(2);
  std::vector<FeatureChannelSeries> channels;
  for (int c = 0; c < 4; ++c) channels.push_back({synthetic_channel_key(c), oracle::random_series(5, 11, rng)});
  channels[2].series.samples.setConstant(1.5);
  const EnsembleRepresentation e = build_ensemble(channels, SystemOrder(3), {"seq", "subj", "fear"});

  std::ostringstream out;
  write_ensemble(out, e);
  std::istringstream in(out.str());
  const EnsembleRepresentation back = read_ensemble(in);
  CHECK(back.order() == e.order());
  CHECK(back.info().id == "seq");
  CHECK(back.info().label == "fear");
  REQUIRE(back.channels().size() == 4);
  CHECK_FALSE(back.channels()[2].informative());
  for (std::size_t c : {0u, 1u, 3u}) {
    CHECK(back.channels()[c].key == e.channels()[c].key);
    CHECK(back.channels()[c].matrix->values() == e.channels()[c].matrix->values());
  }

  std::string truncated = out.str();
  truncated.resize(truncated.size() - 3);
  std::istringstream short_in(truncated);
  CHECK_THROWS_AS(read_ensemble(short_in), Error);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  testing::TempDir dir("sha");
  testing::write_file(dir.path() / "abc.txt", "abc");
  CHECK(sha256_file(dir.path() / "abc.txt") == sha256_hex("abc"));
}
