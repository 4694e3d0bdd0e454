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

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hankel/appearance.hpp"
#include "hankel/dynamics.hpp"
#include "hankel/time_series.hpp"

namespace hankel {

using LabelIndex = int;

/// Ordered label names; the position of a name is its LabelIndex and the
/// final tie-break key.
class LabelVocabulary {
 public:
  LabelVocabulary() = default;
  explicit LabelVocabulary(std::vector<std::string> names);

  /// angry, contempt, disgust, fear, happy, sadness, surprise.
  static LabelVocabulary ck_plus();

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(LabelIndex index) const { return names_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<LabelIndex> index_of(std::string_view name) const;

  friend bool operator==(const LabelVocabulary&, const LabelVocabulary&) = default;

 private:
  std::vector<std::string> names_;
};

struct GalleryEntry {
  std::shared_ptr<const EnsembleRepresentation> ensemble;
  LabelIndex label = 0;
};

/// Immutable set of labelled ensembles with a per-channel index of their
/// informative matrices.
class Gallery {
 public:
  struct Candidate {
    std::size_t entry;
    const HankelMatrix* matrix;
  };

  Gallery(LabelVocabulary labels, std::vector<GalleryEntry> entries);

  const LabelVocabulary& labels() const { return labels_; }
  const std::vector<GalleryEntry>& entries() const { return entries_; }
  /// Informative matrices for a channel; empty if none.
  std::span<const Candidate> candidates(const ChannelKey& key) const;

 private:
  LabelVocabulary labels_;
  std::vector<GalleryEntry> entries_;
  std::map<ChannelKey, std::vector<Candidate>> index_;
};

/// Whether a vote's score grows (similarity) or shrinks (distance) with
/// agreement.
enum class ScoreSense { kSimilarity, kDistance };

struct ChannelVote {
  ChannelKey key;
  std::optional<LabelIndex> label;  // empty when abstained
  double score = 0.0;
  std::string neighbor_id;

  bool abstained() const { return !label.has_value(); }
};

struct Prediction {
  LabelIndex label = 0;
  std::vector<int> tally;           // per label
  std::vector<double> score_sum;    // per label, over non-abstained votes
  std::vector<ChannelVote> votes;   // ordered by channel key
  std::string tie_break;            // "majority", "score" or "label-index"
};

/// Nearest neighbour by maximum similarity among gallery matrices of the
/// same channel. Similarity ties go to the lowest label index, then the
/// lexicographically smallest sequence id. An uninformative query abstains.
/// Throws kEmptyGallery if the gallery has no informative matrix for the
/// channel.
ChannelVote nn_channel(const EnsembleChannel& query, const Gallery& gallery);

/// Most votes wins; tied labels are separated by the summed score (higher
/// similarity or lower distance), then by the lowest label index. Throws
/// kUndecidable when every vote abstained.
Prediction majority_vote(std::span<const ChannelVote> votes, int label_count, ScoreSense sense);

/// nn_channel over every query channel followed by majority_vote. Channels
/// for which no gallery member is informative abstain. Channels run in
/// parallel.
Prediction classify(const EnsembleRepresentation& query, const Gallery& gallery);

/// Classic DTW: Euclidean local cost, full band, match/insert/delete steps
/// each adding the local cost, anchored endpoints.
double dtw_distance(const TimeSeries& a, const TimeSeries& b);

struct RawSequence {
  std::string id;
  std::string subject;
  std::vector<FeatureChannelSeries> channels;  // zero-meaned, sorted by key
};

/// Zero-means every channel.
RawSequence prepare_raw(std::string id, std::string subject,
                        std::span<const FeatureChannelSeries> channels);

struct RawGalleryEntry {
  std::shared_ptr<const RawSequence> sequence;
  LabelIndex label = 0;
};

class RawGallery {
 public:
  RawGallery(LabelVocabulary labels, std::vector<RawGalleryEntry> entries);

  const LabelVocabulary& labels() const { return labels_; }
  const std::vector<RawGalleryEntry>& entries() const { return entries_; }

 private:
  LabelVocabulary labels_;
  std::vector<RawGalleryEntry> entries_;
};

/// Per-channel DTW nearest neighbour (minimum distance) and majority vote.
Prediction dtw_classify(const RawSequence& query, const RawGallery& gallery);

namespace serial {

/// Single-threaded references; identical results to the parallel versions.
Prediction classify(const EnsembleRepresentation& query, const Gallery& gallery);
Prediction dtw_classify(const RawSequence& query, const RawGallery& gallery);

}  // namespace serial
}  // namespace hankel
