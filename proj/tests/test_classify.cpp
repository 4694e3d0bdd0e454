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

#include <algorithm>
#include <random>

#include "hankel/classify.hpp"
#include "hankel/error.hpp"
#include "hankel/eval.hpp"
#include "hankel/synth.hpp"
#include "hankel/synth_bench.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hankel;

namespace {

const LabelVocabulary kAbc({"A", "B", "C"});

std::shared_ptr<const EnsembleRepresentation> ensemble_of(const std::vector<TimeSeries>& channels,
                                                          const std::string& id) {
  std::vector<FeatureChannelSeries> series;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    series.push_back({synthetic_channel_key(static_cast<int>(c)), channels[c]});
  }
  return std::make_shared<const EnsembleRepresentation>(build_ensemble(series, SystemOrder(2), {id, id, {}}));
}

ChannelVote vote(int channel, std::optional<LabelIndex> label, double score) {
  return {synthetic_channel_key(channel), label, score, {}};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected hankel::Error");
  return ErrorCode::kInvalidArgument;
}

/// Per class and channel one oscillatory system; `members` sequences per class.
struct LtiFixture {
  std::vector<std::vector<SyntheticSystem>> systems;  // [class][channel]

  LtiFixture(int classes, int channels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < classes; ++k) {
      systems.emplace_back();
      for (int c = 0; c < channels; ++c) systems.back().push_back(random_oscillatory_system(2, 3, rng));
    }
  }

  std::vector<TimeSeries> draw(int label, std::mt19937_64& rng, int length) const {
    std::vector<TimeSeries> out;
    for (const auto& sys : systems[static_cast<std::size_t>(label)]) {
      out.push_back(synth_generate(sys.with_seed(rng()), length));
    }
    return out;
  }
};

}  // namespace

TEST_CASE("label vocabulary") {
  const LabelVocabulary ck = LabelVocabulary::ck_plus();
  REQUIRE(ck.size() == 7);
  CHECK(ck.name(0) == "angry");
  CHECK(ck.index_of("happy") == 4);
  CHECK_FALSE(ck.index_of("bored").has_value());
  CHECK_THROWS_AS(LabelVocabulary({"a", "a"}), Error);
  CHECK_THROWS_AS(LabelVocabulary({"a", ""}), Error);
}

TEST_CASE("nn_channel") {
  std::mt19937_64 rng(5);
  const LtiFixture lti(2, 1, 71);

  SUBCASE("identical query finds itself") {
    std::vector<GalleryEntry> entries;
    std::vector<std::vector<TimeSeries>> drawn;
    for (int k = 0; k < 6; ++k) {
      drawn.push_back({oracle::random_series(3, 12, rng)});
      entries.push_back({ensemble_of(drawn.back(), "g" + std::to_string(k)), k % 3});
    }
    const Gallery gallery(kAbc, entries);
    const auto query = ensemble_of(drawn[4], "q");
    const ChannelVote v = nn_channel(query->channels()[0], gallery);
    CHECK(v.label == 1);
    CHECK(v.neighbor_id == "g4");
    CHECK(v.score == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("noise-free query joins its own system") {
    const LabelVocabulary ab({"A", "B"});
    std::vector<GalleryEntry> entries;
    for (int k = 0; k < 4; ++k) {
      entries.push_back({ensemble_of(lti.draw(0, rng, 20), "a" + std::to_string(k)), 0});
      entries.push_back({ensemble_of(lti.draw(1, rng, 20), "b" + std::to_string(k)), 1});
    }
    const Gallery gallery(ab, entries);
    for (int k = 0; k < 10; ++k) {
      const int label = k % 2;
      const auto query = ensemble_of(lti.draw(label, rng, 25), "q");
      CHECK(nn_channel(query->channels()[0], gallery).label == label);
    }
  }
  SUBCASE("uninformative query abstains") {
    const Gallery gallery(kAbc, {{ensemble_of({oracle::random_series(3, 9, rng)}, "g"), 0}});
    TimeSeries flat{Eigen::MatrixXd::Constant(3, 9, 4.0)};
    const auto query = ensemble_of({flat}, "q");
    CHECK(nn_channel(query->channels()[0], gallery).abstained());
  }
  SUBCASE("channel with no gallery matrix") {
    const Gallery gallery(kAbc, {});
    const auto query = ensemble_of({oracle::random_series(3, 9, rng)}, "q");
    CHECK(code_of([&] { nn_channel(query->channels()[0], gallery); }) == ErrorCode::kEmptyGallery);
  }
  SUBCASE("similarity ties go to the lowest label, then the smallest id") {
    const std::vector<TimeSeries> same{oracle::random_series(2, 10, rng)};
    const Gallery gallery(kAbc, {{ensemble_of(same, "z"), 2}, {ensemble_of(same, "y"), 1}, {ensemble_of(same, "x"), 1}});
    const ChannelVote v = nn_channel(ensemble_of(same, "q")->channels()[0], gallery);
    CHECK(v.label == 1);
    CHECK(v.neighbor_id == "x");
  }
}

TEST_CASE("majority_vote") {
  SUBCASE("strict majority") {
    const std::vector<ChannelVote> votes{vote(0, 0, 0.2), vote(1, 0, 0.3), vote(2, 1, 0.99)};
    const Prediction p = majority_vote(votes, 3, ScoreSense::kSimilarity);
    CHECK(p.label == 0);
    CHECK(p.tally == std::vector<int>{2, 1, 0});
    CHECK(p.tie_break == "majority");
  }
  SUBCASE("tied tally decided by summed similarity") {
    const std::vector<ChannelVote> votes{vote(0, 0, 0.9), vote(1, 0, 0.8), vote(2, 1, 0.95), vote(3, 1, 0.6)};
    const Prediction p = majority_vote(votes, 3, ScoreSense::kSimilarity);
    CHECK(p.label == 0);
    CHECK(p.score_sum[0] == doctest::Approx(1.7));
    CHECK(p.score_sum[1] == doctest::Approx(1.55));
    CHECK(p.tie_break == "score");
  }
  SUBCASE("tied tally with distances prefers the smaller sum") {
    const std::vector<ChannelVote> votes{vote(0, 0, 3.0), vote(1, 2, 1.0)};
    const Prediction p = majority_vote(votes, 3, ScoreSense::kDistance);
    CHECK(p.label == 2);
    CHECK(p.tie_break == "score");
  }
  SUBCASE("full tie falls back to the label index") {
    const std::vector<ChannelVote> votes{vote(0, 2, 0.5), vote(1, 1, 0.5)};
    const Prediction p = majority_vote(votes, 3, ScoreSense::kSimilarity);
    CHECK(p.label == 1);
    CHECK(p.tie_break == "label-index");
  }
  SUBCASE("16 of 30 channels win regardless of scores") {
    std::vector<ChannelVote> votes;
    for (int c = 0; c < 30; ++c) votes.push_back(c < 16 ? vote(c, 2, 0.01) : vote(c, 0, 1.0));
    const Prediction p = majority_vote(votes, 3, ScoreSense::kSimilarity);
    CHECK(p.label == 2);
    CHECK(p.tally[2] == 16);
  }
  SUBCASE("abstentions are ignored, all-abstained is undecidable") {
    const std::vector<ChannelVote> some{vote(0, std::nullopt, 0.0), vote(1, 1, 0.4)};
    CHECK(majority_vote(some, 3, ScoreSense::kSimilarity).label == 1);
    const std::vector<ChannelVote> none{vote(0, std::nullopt, 0.0)};
    CHECK(code_of([&] { majority_vote(none, 3, ScoreSense::kSimilarity); }) == ErrorCode::kUndecidable);
  }
}

TEST_CASE("classify") {
  std::mt19937_64 rng(404);
  const LtiFixture lti(3, 5, 9001);

  SUBCASE("query equal to a gallery member takes its label on every channel") {
    std::vector<GalleryEntry> entries;
    std::vector<std::vector<TimeSeries>> drawn;
    for (int k = 0; k < 6; ++k) {
      std::vector<TimeSeries> channels;
      for (int c = 0; c < 4; ++c) channels.push_back(oracle::random_series(5, 14, rng));
      drawn.push_back(channels);
      entries.push_back({ensemble_of(channels, "g" + std::to_string(k)), k % 3});
    }
    const Gallery gallery(kAbc, entries);
    const Prediction p = classify(*ensemble_of(drawn[2], "q"), gallery);
    CHECK(p.label == 2);
    CHECK(p.tally[2] == 4);
    for (const auto& v : p.votes) CHECK(v.neighbor_id == "g2");
  }

  SUBCASE("three noise-free classes are separated perfectly") {
    std::vector<GalleryEntry> entries;
    for (int m = 0; m < 3; ++m) {
      for (int k = 0; k < 3; ++k) {
        entries.push_back({ensemble_of(lti.draw(k, rng, 20), "g" + std::to_string(m * 3 + k)), k});
      }
    }
    const Gallery gallery(kAbc, entries);
    for (int trial = 0; trial < 9; ++trial) {
      const int label = trial % 3;
      const auto query = ensemble_of(lti.draw(label, rng, 18 + trial), "q");
      // Brute force: the best same-class match beats every other class on each channel.
      for (std::size_t c = 0; c < query->channels().size(); ++c) {
        double best_same = 0.0, best_other = 0.0;
        for (const auto& e : entries) {
          const double s = oracle::similarity_by_loops(query->channels()[c].matrix->values(),
                                                       e.ensemble->channels()[c].matrix->values());
          (e.label == label ? best_same : best_other) = std::max(e.label == label ? best_same : best_other, s);
        }
        REQUIRE(best_same > best_other);
      }
      const Prediction p = classify(*query, gallery);
      CHECK(p.label == label);
      CHECK(p.tally[static_cast<std::size_t>(label)] == 5);
    }
  }

  SUBCASE("single channel equals the channel vote") {
    std::vector<GalleryEntry> entries;
    for (int k = 0; k < 6; ++k) {
      entries.push_back({ensemble_of({oracle::random_series(3, 10, rng)}, "g" + std::to_string(k)), k % 3});
    }
    const Gallery gallery(kAbc, entries);
    for (int t = 0; t < 10; ++t) {
      const auto query = ensemble_of({oracle::random_series(3, 10, rng)}, "q");
      CHECK(classify(*query, gallery).label == *nn_channel(query->channels()[0], gallery).label);
    }
  }

  SUBCASE("gallery order does not change the prediction") {
    std::vector<GalleryEntry> entries;
    for (int k = 0; k < 9; ++k) {
      std::vector<TimeSeries> channels;
      for (int c = 0; c < 5; ++c) channels.push_back(oracle::random_series(3, 12, rng));
      entries.push_back({ensemble_of(channels, "g" + std::to_string(k)), k % 3});
    }
    std::vector<TimeSeries> q;
    for (int c = 0; c < 5; ++c) q.push_back(oracle::random_series(3, 12, rng));
    const auto query = ensemble_of(q, "q");
    const Prediction base = classify(*query, Gallery(kAbc, entries));
    for (int s = 0; s < 5; ++s) {
      std::shuffle(entries.begin(), entries.end(), rng);
      const Prediction p = classify(*query, Gallery(kAbc, entries));
      CHECK(p.label == base.label);
      CHECK(p.tally == base.tally);
      CHECK(p.tie_break == base.tie_break);
      for (std::size_t c = 0; c < p.votes.size(); ++c) CHECK(p.votes[c].neighbor_id == base.votes[c].neighbor_id);
    }
  }

  SUBCASE("removing a channel only removes its vote") {
    std::vector<std::vector<TimeSeries>> drawn;
    std::vector<GalleryEntry> full, reduced;
    for (int k = 0; k < 6; ++k) {
      std::vector<TimeSeries> channels;
      for (int c = 0; c < 4; ++c) channels.push_back(oracle::random_series(3, 11, rng));
      std::vector<TimeSeries> fewer(channels.begin(), channels.begin() + 3);
      full.push_back({ensemble_of(channels, "g" + std::to_string(k)), k % 3});
      reduced.push_back({ensemble_of(fewer, "g" + std::to_string(k)), k % 3});
    }
    std::vector<TimeSeries> q;
    for (int c = 0; c < 4; ++c) q.push_back(oracle::random_series(3, 11, rng));
    const Prediction a = classify(*ensemble_of(q, "q"), Gallery(kAbc, full));
    const Prediction b = classify(*ensemble_of({q.begin(), q.begin() + 3}, "q"), Gallery(kAbc, reduced));
    REQUIRE(b.votes.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(a.votes[c].label == b.votes[c].label);
      CHECK(a.votes[c].score == b.votes[c].score);
    }
  }

  SUBCASE("serial and parallel agree") {
    std::vector<GalleryEntry> entries;
    for (int k = 0; k < 6; ++k) entries.push_back({ensemble_of(lti.draw(k % 3, rng, 20), "g" + std::to_string(k)), k % 3});
    const Gallery gallery(kAbc, entries);
    const auto query = ensemble_of(lti.draw(1, rng, 20), "q");
    const Prediction a = classify(*query, gallery);
    const Prediction b = serial::classify(*query, gallery);
    CHECK(a.label == b.label);
    CHECK(a.score_sum == b.score_sum);
  }
}

TEST_CASE("pixel gain leaves every vote unchanged") {
  std::vector<GrayImage> frames;
  std::vector<GrayImage> brighter;
  std::vector<GalleryEntry> entries;
  std::vector<GalleryEntry> entries_gain;
  const std::vector<FaceRegion> region{{4, 4, 40, 40}};
  ExtractionConfig config;
  config.scales = {0.3, 0.5};
  auto ensemble_from = [&](const std::vector<GrayImage>& images, const std::string& id) {
    const ExtractionResult r = extract_sequence(images, region, config);
    return std::make_shared<const EnsembleRepresentation>(build_ensemble(r.channels, SystemOrder(2), {id, id, {}}));
  };
  auto sequence = [&](int label, double phase, double gain) {
    std::vector<GrayImage> out;
    for (int t = 0; t < 8; ++t) {
      GrayImage f = testing::moving_blob_frame(label, t, phase);
      for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) f.at(x, y) *= gain;
      }
      out.push_back(std::move(f));
    }
    return out;
  };
  for (int k = 0; k < 6; ++k) {
    entries.push_back({ensemble_from(sequence(k % 3, 0.3 * k, 1.0), "g" + std::to_string(k)), k % 3});
    entries_gain.push_back({ensemble_from(sequence(k % 3, 0.3 * k, 3.7), "g" + std::to_string(k)), k % 3});
  }
  const Prediction a = classify(*ensemble_from(sequence(1, 2.1, 1.0), "q"), Gallery(kAbc, entries));
  const Prediction b = classify(*ensemble_from(sequence(1, 2.1, 3.7), "q"), Gallery(kAbc, entries_gain));
  CHECK(a.label == b.label);
  REQUIRE(a.votes.size() == b.votes.size());
  for (std::size_t c = 0; c < a.votes.size(); ++c) {
    CHECK(a.votes[c].label == b.votes[c].label);
    CHECK(a.votes[c].neighbor_id == b.votes[c].neighbor_id);
  }
}

TEST_CASE("dtw_distance") {
  std::mt19937_64 rng(13);
  SUBCASE("identical inputs") {
    const TimeSeries a = oracle::random_series(4, 9, rng);
    CHECK(dtw_distance(a, a) == 0.0);
  }
  SUBCASE("constant offset pays once per matched frame") {
    const TimeSeries zeros{Eigen::MatrixXd::Zero(1, 3)};
    const TimeSeries ones{Eigen::MatrixXd::Ones(1, 3)};
    CHECK(dtw_distance(zeros, ones) == doctest::Approx(3.0));
    CHECK(oracle::dtw_enumerate(zeros, ones) == doctest::Approx(3.0));
  }
  SUBCASE("matches exhaustive path enumeration") {
    for (int k = 0; k < 40; ++k) {
      const TimeSeries a = oracle::random_series(1 + k % 3, 1 + k % 6, rng);
      const TimeSeries b = oracle::random_series(1 + k % 3, 1 + (k * 5) % 7, rng);
      CHECK(dtw_distance(a, b) == doctest::Approx(oracle::dtw_enumerate(a, b)).epsilon(1e-12));
    }
  }
  SUBCASE("symmetric and bounded by the diagonal path") {
    for (int k = 0; k < 40; ++k) {
      const TimeSeries a = oracle::random_series(3, 12, rng);
      const TimeSeries b = oracle::random_series(3, 12, rng);
      CHECK(dtw_distance(a, b) == doctest::Approx(dtw_distance(b, a)).epsilon(1e-12));
      CHECK(dtw_distance(a, b) <= (a.samples - b.samples).colwise().norm().sum() + 1e-12);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK(code_of([&] { dtw_distance(oracle::random_series(2, 4, rng), oracle::random_series(3, 4, rng)); }) ==
          ErrorCode::kIncompatibleChannels);
  }
}

TEST_CASE("dtw_classify") {
  std::mt19937_64 rng(88);
  auto raw = [&](const std::vector<TimeSeries>& channels, const std::string& id) {
    std::vector<FeatureChannelSeries> series;
    for (std::size_t c = 0; c < channels.size(); ++c) series.push_back({synthetic_channel_key(static_cast<int>(c)), channels[c]});
    return std::make_shared<const RawSequence>(prepare_raw(id, id, series));
  };
  std::vector<std::vector<TimeSeries>> drawn;
  std::vector<RawGalleryEntry> entries;
  for (int k = 0; k < 6; ++k) {
    std::vector<TimeSeries> channels;
    for (int c = 0; c < 3; ++c) channels.push_back(oracle::random_series(4, 10 + k, rng));
    drawn.push_back(channels);
    entries.push_back({raw(channels, "g" + std::to_string(k)), k % 3});
  }
  const RawGallery gallery(kAbc, entries);

  SUBCASE("member query") {
    const Prediction p = dtw_classify(*raw(drawn[4], "q"), gallery);
    CHECK(p.label == 1);
    for (const auto& v : p.votes) CHECK(v.score == 0.0);
  }
  SUBCASE("single channel equals plain DTW nearest neighbour") {
    std::vector<RawGalleryEntry> single;
    for (int k = 0; k < 6; ++k) single.push_back({raw({drawn[static_cast<std::size_t>(k)][0]}, "g" + std::to_string(k)), k % 3});
    const RawGallery g1(kAbc, single);
    for (int t = 0; t < 8; ++t) {
      const auto q = raw({oracle::random_series(4, 11, rng)}, "q");
      double best = std::numeric_limits<double>::infinity();
      LabelIndex best_label = -1;
      for (const auto& e : single) {
        const double d = dtw_distance(q->channels[0].series, e.sequence->channels[0].series);
        if (d < best) {
          best = d;
          best_label = e.label;
        }
      }
      CHECK(dtw_classify(*q, g1).label == best_label);
    }
  }
  SUBCASE("serial and parallel agree") {
    const auto q = raw({oracle::random_series(4, 9, rng), oracle::random_series(4, 9, rng), oracle::random_series(4, 9, rng)}, "q");
    const Prediction a = dtw_classify(*q, gallery);
    const Prediction b = serial::dtw_classify(*q, gallery);
    CHECK(a.label == b.label);
    CHECK(a.score_sum == b.score_sum);
  }
}

TEST_CASE("dynamics beat raw alignment on time-warped same-system data") {
  SynthBenchSpec spec;
  spec.time_warp = true;
  spec.noise_levels = {0.0};
  double hankel_sum = 0.0;
  double dtw_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const FeatureDataset data = make_synthetic_dataset(spec, 0.0, seed);
    EvalConfig config;
    hankel_sum += evaluate(data, config).report.average;
    config.method = Method::kDtw;
    dtw_sum += evaluate(data, config).report.average;
  }
  MESSAGE("mean accuracy hankel " << hankel_sum / 8 << " dtw " << dtw_sum / 8);
  CHECK(hankel_sum >= dtw_sum);
}
