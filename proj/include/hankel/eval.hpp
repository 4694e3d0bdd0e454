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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hankel/appearance.hpp"
#include "hankel/classify.hpp"
#include "hankel/dynamics.hpp"

namespace hankel {

// ---------------------------------------------------------------------------
// Dataset manifest
//
// JSON Lines, version 1. The first non-comment line is a header
//   {"format": "hankel-manifest", "version": 1, "labels": [...]}
// ("labels" is optional and defaults to the seven CK+ emotions), followed by
// one object per sequence:
//   {"id": "S005_001", "subject": "S005", "label": "disgust",
//    "frames": ["S005/001/0001.png", ...], "region": [x, y, w, h]}
// "regions" (one box per frame) may replace "region". Frame paths are
// resolved relative to the manifest's directory. Blank lines and lines
// starting with '#' are ignored.
// ---------------------------------------------------------------------------

inline constexpr int kManifestVersion = 1;

struct ManifestEntry {
  std::string id;
  std::string subject;
  LabelIndex label = 0;
  std::vector<std::filesystem::path> frames;
  std::vector<FaceRegion> regions;  // one box for all frames, or one per frame
};

struct DatasetManifest {
  LabelVocabulary labels;
  std::vector<ManifestEntry> entries;
  std::filesystem::path source;
};

/// Validates everything and fails atomically with an itemized kIngestion
/// report: malformed lines, missing frames, duplicate ids, unknown labels,
/// sequences shorter than order + 1 frames, bad regions.
DatasetManifest load_manifest(const std::filesystem::path& path, SystemOrder order);
DatasetManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir,
                               SystemOrder order, std::string_view source_name = "<manifest>");

struct ManifestSummary {
  std::size_t sequences = 0;
  std::size_t subjects = 0;
  std::vector<std::size_t> class_counts;  // per label
};

ManifestSummary summarize(const DatasetManifest& manifest);

// ---------------------------------------------------------------------------
// Leave-one-subject-out protocol
// ---------------------------------------------------------------------------

struct Fold {
  std::string held_out_subject;
  std::vector<std::size_t> test;   // sequence indices
  std::vector<std::size_t> train;  // sequence indices
};

/// One fold per distinct subject, ordered by subject id. Throws kProtocol
/// with fewer than two subjects.
std::vector<Fold> loso_folds(std::span<const std::string> subjects);
std::vector<Fold> loso_folds(const DatasetManifest& manifest);

/// Throws kProtocol unless the folds partition every sequence exactly once
/// into test sets with no subject on both sides of any fold.
void check_fold_partition(std::span<const Fold> folds, std::span<const std::string> subjects);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Rows are true labels, columns predicted labels.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int labels = 0);

  int size() const { return size_; }
  long count(LabelIndex truth, LabelIndex predicted) const;
  void add(LabelIndex truth, LabelIndex predicted);
  long row_total(LabelIndex truth) const;
  long total() const;
  /// Row-normalized percentage; 0 for an empty row.
  double row_percent(LabelIndex truth, LabelIndex predicted) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int size_;
  std::vector<long> counts_;
};

/// Throws kInvalidArgument on length mismatch or labels outside [0, labels).
ConfusionMatrix confusion(std::span<const LabelIndex> predicted,
                          std::span<const LabelIndex> truth, int labels);

struct FoldSummary {
  std::string subject;
  int tested = 0;
  int correct = 0;
};

struct AccuracyReport {
  /// Row-normalized diagonal in percent; empty for classes without test
  /// sequences.
  std::vector<std::optional<double>> per_class;
  /// Unweighted mean over classes that have test sequences.
  double average = 0.0;
  std::vector<FoldSummary> folds;
};

AccuracyReport accuracy_report(const ConfusionMatrix& matrix, std::vector<FoldSummary> folds);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct SequenceFeatures {
  std::string id;
  std::string subject;
  LabelIndex label = 0;
  std::vector<FeatureChannelSeries> channels;
};

struct FeatureDataset {
  LabelVocabulary labels;
  std::vector<SequenceFeatures> sequences;
  long degenerate_windows = 0;
};

/// Loads every frame and extracts all channels; sequences run in parallel.
FeatureDataset extract_dataset(const DatasetManifest& manifest, const ExtractionConfig& config);

enum class Method { kHankel, kDtw };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view text);

struct EvalConfig {
  Method method = Method::kHankel;
  std::vector<HaarKind> kinds{kAllHaarKinds.begin(), kAllHaarKinds.end()};
  SystemOrder order{2};
};

struct SequencePrediction {
  std::string id;
  std::string subject;
  LabelIndex truth = 0;
  Prediction prediction;
};

struct EvaluationResult {
  std::vector<Fold> folds;
  std::vector<SequencePrediction> predictions;  // dataset order
  ConfusionMatrix matrix;
  AccuracyReport report;
};

/// Leave-one-subject-out classification of every sequence; folds run in
/// parallel. Channels whose kind is not in config.kinds are ignored.
EvaluationResult evaluate(const FeatureDataset& dataset, const EvalConfig& config);

namespace serial {

EvaluationResult evaluate(const FeatureDataset& dataset, const EvalConfig& config);

}  // namespace serial

/// "all" for the full set of six kinds, otherwise kind names joined by '+'.
std::string kinds_label(std::span<const HaarKind> kinds);

}  // namespace hankel
