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

#include "hankel/classify.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <string>

#include "hankel/error.hpp"

namespace hankel {
namespace {

// True when (score, label, id) beats the current best under `sense`.
bool better_neighbor(ScoreSense sense, double score, LabelIndex label, const std::string& id,
                     const ChannelVote& best) {
  if (best.abstained()) return true;
  if (score != best.score) {
    return sense == ScoreSense::kSimilarity ? score > best.score : score < best.score;
  }
  if (label != *best.label) return label < *best.label;
  return id < best.neighbor_id;
}

ChannelVote vote_hankel_channel(const EnsembleChannel& channel, const Gallery& gallery) {
  try {
    return nn_channel(channel, gallery);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyGallery) throw;
    return ChannelVote{channel.key, std::nullopt, 0.0, {}};
  }
}

const FeatureChannelSeries* find_channel(const RawSequence& sequence, const ChannelKey& key) {
  const auto it = std::lower_bound(
      sequence.channels.begin(), sequence.channels.end(), key,
      [](const FeatureChannelSeries& c, const ChannelKey& k) { return c.key < k; });
  if (it == sequence.channels.end() || !(it->key == key)) return nullptr;
  return &*it;
}

ChannelVote vote_dtw_channel(const FeatureChannelSeries& query, const RawGallery& gallery) {
  ChannelVote best{query.key, std::nullopt, 0.0, {}};
  for (const RawGalleryEntry& entry : gallery.entries()) {
    const FeatureChannelSeries* candidate = find_channel(*entry.sequence, query.key);
    if (candidate == nullptr) {
      throw Error(ErrorCode::kIncompatibleChannels,
                  "gallery sequence '" + entry.sequence->id + "' lacks channel " +
                      to_string(query.key));
    }
    const double distance = dtw_distance(query.series, candidate->series);
    if (better_neighbor(ScoreSense::kDistance, distance, entry.label, entry.sequence->id, best)) {
      best.label = entry.label;
      best.score = distance;
      best.neighbor_id = entry.sequence->id;
    }
  }
  if (best.abstained()) {
    throw Error(ErrorCode::kEmptyGallery, "DTW gallery is empty");
  }
  return best;
}

template <typename Kernel>
std::vector<ChannelVote> collect_votes_parallel(std::size_t count, Kernel kernel) {
  std::vector<ChannelVote> votes(count);
  std::exception_ptr failure;
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      votes[static_cast<std::size_t>(i)] = kernel(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(hankel_vote_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return votes;
}

template <typename Kernel>
std::vector<ChannelVote> collect_votes_serial(std::size_t count, Kernel kernel) {
  std::vector<ChannelVote> votes;
  votes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) votes.push_back(kernel(i));
  return votes;
}

}  // namespace

LabelVocabulary::LabelVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::kInvalidArgument, "label vocabulary is empty");
  std::set<std::string> seen;
  for (const std::string& name : names_) {
    if (name.empty() || !seen.insert(name).second) {
      throw Error(ErrorCode::kInvalidArgument, "label names must be unique and non-empty");
    }
  }
}

LabelVocabulary LabelVocabulary::ck_plus() {
  return LabelVocabulary(
      {"angry", "contempt", "disgust", "fear", "happy", "sadness", "surprise"});
}

std::optional<LabelIndex> LabelVocabulary::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<LabelIndex>(it - names_.begin());
}

Gallery::Gallery(LabelVocabulary labels, std::vector<GalleryEntry> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  std::optional<SystemOrder> order;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const GalleryEntry& entry = entries_[i];
    if (!entry.ensemble) throw Error(ErrorCode::kInvalidArgument, "null gallery ensemble");
    if (entry.label < 0 || entry.label >= labels_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "gallery label outside vocabulary for '" + entry.ensemble->info().id + "'");
    }
    if (order && !(*order == entry.ensemble->order())) {
      throw Error(ErrorCode::kIncompatibleChannels, "gallery ensembles use different orders");
    }
    order = entry.ensemble->order();
    for (const EnsembleChannel& channel : entry.ensemble->channels()) {
      auto& bucket = index_[channel.key];
      if (channel.matrix) bucket.push_back({i, &*channel.matrix});
    }
  }
}

std::span<const Gallery::Candidate> Gallery::candidates(const ChannelKey& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

ChannelVote nn_channel(const EnsembleChannel& query, const Gallery& gallery) {
  const auto candidates = gallery.candidates(query.key);
  if (candidates.empty()) {
    throw Error(ErrorCode::kEmptyGallery,
                "no gallery matrices for channel " + to_string(query.key));
  }
  ChannelVote best{query.key, std::nullopt, 0.0, {}};
  if (!query.informative()) return best;
  for (const Gallery::Candidate& candidate : candidates) {
    const GalleryEntry& entry = gallery.entries()[candidate.entry];
    const double score = similarity(*query.matrix, *candidate.matrix);
    if (better_neighbor(ScoreSense::kSimilarity, score, entry.label, entry.ensemble->info().id,
                        best)) {
      best.label = entry.label;
      best.score = score;
      best.neighbor_id = entry.ensemble->info().id;
    }
  }
  return best;
}

Prediction majority_vote(std::span<const ChannelVote> votes, int label_count, ScoreSense sense) {
  if (label_count < 1) throw Error(ErrorCode::kInvalidArgument, "no labels to vote for");
  Prediction prediction;
  prediction.tally.assign(static_cast<std::size_t>(label_count), 0);
  prediction.score_sum.assign(static_cast<std::size_t>(label_count), 0.0);
  prediction.votes.assign(votes.begin(), votes.end());
  std::sort(prediction.votes.begin(), prediction.votes.end(),
            [](const ChannelVote& a, const ChannelVote& b) { return a.key < b.key; });
  int cast = 0;
  for (const ChannelVote& vote : prediction.votes) {
    if (vote.abstained()) continue;
    if (*vote.label < 0 || *vote.label >= label_count) {
      throw Error(ErrorCode::kInvalidArgument, "vote for a label outside the vocabulary");
    }
    ++prediction.tally[static_cast<std::size_t>(*vote.label)];
    prediction.score_sum[static_cast<std::size_t>(*vote.label)] += vote.score;
    ++cast;
  }
  if (cast == 0) {
    throw Error(ErrorCode::kUndecidable, "every channel abstained");
  }
  const int top = *std::max_element(prediction.tally.begin(), prediction.tally.end());
  std::vector<LabelIndex> tied;
  for (LabelIndex l = 0; l < label_count; ++l) {
    if (prediction.tally[static_cast<std::size_t>(l)] == top) tied.push_back(l);
  }
  if (tied.size() == 1) {
    prediction.label = tied.front();
    prediction.tie_break = "majority";
    return prediction;
  }
  const auto score_of = [&](LabelIndex l) { return prediction.score_sum[static_cast<std::size_t>(l)]; };
  double best_score = score_of(tied.front());
  for (LabelIndex l : tied) {
    best_score = sense == ScoreSense::kSimilarity ? std::max(best_score, score_of(l))
                                                  : std::min(best_score, score_of(l));
  }
  std::vector<LabelIndex> still_tied;
  for (LabelIndex l : tied) {
    if (score_of(l) == best_score) still_tied.push_back(l);
  }
  prediction.label = still_tied.front();
  prediction.tie_break = still_tied.size() == 1 ? "score" : "label-index";
  return prediction;
}

Prediction classify(const EnsembleRepresentation& query, const Gallery& gallery) {
  const auto& channels = query.channels();
  auto votes = collect_votes_parallel(channels.size(), [&](std::size_t i) {
    return vote_hankel_channel(channels[i], gallery);
  });
  return majority_vote(votes, gallery.labels().size(), ScoreSense::kSimilarity);
}

RawSequence prepare_raw(std::string id, std::string subject,
                        std::span<const FeatureChannelSeries> channels) {
  RawSequence raw{std::move(id), std::move(subject), {}};
  raw.channels.reserve(channels.size());
  for (const FeatureChannelSeries& c : channels) raw.channels.push_back({c.key, zero_mean(c.series)});
  std::sort(raw.channels.begin(), raw.channels.end(),
            [](const FeatureChannelSeries& a, const FeatureChannelSeries& b) { return a.key < b.key; });
  return raw;
}

RawGallery::RawGallery(LabelVocabulary labels, std::vector<RawGalleryEntry> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  for (const RawGalleryEntry& entry : entries_) {
    if (!entry.sequence) throw Error(ErrorCode::kInvalidArgument, "null gallery sequence");
    if (entry.label < 0 || entry.label >= labels_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "gallery label outside vocabulary for '" + entry.sequence->id + "'");
    }
  }
}

Prediction dtw_classify(const RawSequence& query, const RawGallery& gallery) {
  auto votes = collect_votes_parallel(query.channels.size(), [&](std::size_t i) {
    return vote_dtw_channel(query.channels[i], gallery);
  });
  return majority_vote(votes, gallery.labels().size(), ScoreSense::kDistance);
}

namespace serial {

Prediction classify(const EnsembleRepresentation& query, const Gallery& gallery) {
  const auto& channels = query.channels();
  auto votes = collect_votes_serial(channels.size(), [&](std::size_t i) {
    return vote_hankel_channel(channels[i], gallery);
  });
  return majority_vote(votes, gallery.labels().size(), ScoreSense::kSimilarity);
}

Prediction dtw_classify(const RawSequence& query, const RawGallery& gallery) {
  auto votes = collect_votes_serial(query.channels.size(), [&](std::size_t i) {
    return vote_dtw_channel(query.channels[i], gallery);
  });
  return majority_vote(votes, gallery.labels().size(), ScoreSense::kDistance);
}

}  // namespace serial
}  // namespace hankel
