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

#include <algorithm>
#include <exception>
#include <memory>
#include <string>

#include "hankel/error.hpp"
#include "hankel/eval.hpp"
#include "hankel/image_io.hpp"

namespace hankel {
namespace {

std::vector<FeatureChannelSeries> select_kinds(const std::vector<FeatureChannelSeries>& channels,
                                               std::span<const HaarKind> kinds) {
  std::vector<FeatureChannelSeries> out;
  for (const FeatureChannelSeries& c : channels) {
    if (std::find(kinds.begin(), kinds.end(), c.key.kind) != kinds.end()) out.push_back(c);
  }
  return out;
}

// Per-sequence representations shared by every fold.
struct Prepared {
  std::vector<std::shared_ptr<const EnsembleRepresentation>> ensembles;
  std::vector<std::shared_ptr<const RawSequence>> raw;
};

void prepare_one(const FeatureDataset& dataset, const EvalConfig& config, std::size_t i,
                 Prepared& out) {
  const SequenceFeatures& s = dataset.sequences[i];
  const auto channels = select_kinds(s.channels, config.kinds);
  if (channels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sequence '" + s.id + "' has no channels for the selected kinds");
  }
  if (config.method == Method::kHankel) {
    out.ensembles[i] = std::make_shared<const EnsembleRepresentation>(build_ensemble(
        channels, config.order, SequenceInfo{s.id, s.subject, dataset.labels.name(s.label)}));
  } else {
    out.raw[i] = std::make_shared<const RawSequence>(prepare_raw(s.id, s.subject, channels));
  }
}

std::vector<std::string> subjects_of(const FeatureDataset& dataset) {
  std::vector<std::string> subjects;
  subjects.reserve(dataset.sequences.size());
  for (const SequenceFeatures& s : dataset.sequences) subjects.push_back(s.subject);
  return subjects;
}

// Classifies the test side of one fold. Parallelism lives at the fold level,
// so channels are scanned serially here.
std::vector<SequencePrediction> run_fold(const FeatureDataset& dataset, const EvalConfig& config,
                                         const Prepared& prepared, const Fold& fold) {
  std::vector<SequencePrediction> out;
  try {
    if (config.method == Method::kHankel) {
      std::vector<GalleryEntry> entries;
      entries.reserve(fold.train.size());
      for (std::size_t i : fold.train) {
        entries.push_back({prepared.ensembles[i], dataset.sequences[i].label});
      }
      const Gallery gallery(dataset.labels, std::move(entries));
      for (std::size_t i : fold.test) {
        const SequenceFeatures& s = dataset.sequences[i];
        out.push_back({s.id, s.subject, s.label, serial::classify(*prepared.ensembles[i], gallery)});
      }
    } else {
      std::vector<RawGalleryEntry> entries;
      entries.reserve(fold.train.size());
      for (std::size_t i : fold.train) entries.push_back({prepared.raw[i], dataset.sequences[i].label});
      const RawGallery gallery(dataset.labels, std::move(entries));
      for (std::size_t i : fold.test) {
        const SequenceFeatures& s = dataset.sequences[i];
        out.push_back({s.id, s.subject, s.label, serial::dtw_classify(*prepared.raw[i], gallery)});
      }
    }
  } catch (const Error& e) {
    throw Error(e.code(), "fold '" + fold.held_out_subject + "': " + e.what());
  }
  return out;
}

EvaluationResult assemble(const FeatureDataset& dataset, std::vector<Fold> folds,
                          std::vector<std::vector<SequencePrediction>> per_fold) {
  EvaluationResult result;
  result.predictions.resize(dataset.sequences.size());
  std::vector<FoldSummary> summaries;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    FoldSummary summary{folds[f].held_out_subject, 0, 0};
    for (std::size_t k = 0; k < folds[f].test.size(); ++k) {
      SequencePrediction& p = per_fold[f][k];
      ++summary.tested;
      if (p.prediction.label == p.truth) ++summary.correct;
      result.predictions[folds[f].test[k]] = std::move(p);
    }
    summaries.push_back(std::move(summary));
  }
  std::vector<LabelIndex> predicted;
  std::vector<LabelIndex> truth;
  for (const SequencePrediction& p : result.predictions) {
    predicted.push_back(p.prediction.label);
    truth.push_back(p.truth);
  }
  result.matrix = confusion(predicted, truth, dataset.labels.size());
  result.report = accuracy_report(result.matrix, std::move(summaries));
  result.folds = std::move(folds);
  return result;
}

void validate(const FeatureDataset& dataset, const EvalConfig& config) {
  if (config.kinds.empty()) throw Error(ErrorCode::kInvalidArgument, "no Haar kinds selected");
  if (dataset.sequences.empty()) throw Error(ErrorCode::kProtocol, "dataset is empty");
  for (const SequenceFeatures& s : dataset.sequences) {
    if (s.label < 0 || s.label >= dataset.labels.size()) {
      throw Error(ErrorCode::kInvalidArgument, "sequence '" + s.id + "' has an unknown label");
    }
  }
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::kHankel ? "hankel" : "dtw";
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "hankel") return Method::kHankel;
  if (text == "dtw") return Method::kDtw;
  return std::nullopt;
}

std::string kinds_label(std::span<const HaarKind> kinds) {
  std::vector<HaarKind> sorted(kinds.begin(), kinds.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() == kAllHaarKinds.size()) return "all";
  std::string label;
  for (HaarKind k : sorted) {
    if (!label.empty()) label += '+';
    label += to_string(k);
  }
  return label;
}

FeatureDataset extract_dataset(const DatasetManifest& manifest, const ExtractionConfig& config) {
  config.validate();
  FeatureDataset dataset;
  dataset.labels = manifest.labels;
  dataset.sequences.resize(manifest.entries.size());
  const long count = static_cast<long>(manifest.entries.size());
  long degenerate = 0;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) reduction(+ : degenerate)
  for (long i = 0; i < count; ++i) {
    try {
      const ManifestEntry& entry = manifest.entries[static_cast<std::size_t>(i)];
      std::vector<GrayImage> frames;
      frames.reserve(entry.frames.size());
      for (const auto& path : entry.frames) frames.push_back(load_gray_image(path));
      ExtractionResult extracted;
      try {
        extracted = serial::extract_sequence(frames, entry.regions, config);
      } catch (const Error& e) {
        throw Error(e.code(), "sequence '" + entry.id + "': " + e.what());
      }
      degenerate += extracted.degenerate_windows;
      dataset.sequences[static_cast<std::size_t>(i)] = {entry.id, entry.subject, entry.label,
                                                        std::move(extracted.channels)};
    } catch (...) {
#pragma omp critical(hankel_dataset_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  dataset.degenerate_windows = degenerate;
  return dataset;
}

EvaluationResult evaluate(const FeatureDataset& dataset, const EvalConfig& config) {
  validate(dataset, config);
  const auto subjects = subjects_of(dataset);
  std::vector<Fold> folds = loso_folds(subjects);
  check_fold_partition(folds, subjects);

  Prepared prepared;
  prepared.ensembles.resize(dataset.sequences.size());
  prepared.raw.resize(dataset.sequences.size());
  const long count = static_cast<long>(dataset.sequences.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      prepare_one(dataset, config, static_cast<std::size_t>(i), prepared);
    } catch (...) {
#pragma omp critical(hankel_eval_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<SequencePrediction>> per_fold(folds.size());
  const long fold_count = static_cast<long>(folds.size());
#pragma omp parallel for schedule(dynamic)
  for (long f = 0; f < fold_count; ++f) {
    try {
      per_fold[static_cast<std::size_t>(f)] =
          run_fold(dataset, config, prepared, folds[static_cast<std::size_t>(f)]);
    } catch (...) {
#pragma omp critical(hankel_eval_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(dataset, std::move(folds), std::move(per_fold));
}

namespace serial {

EvaluationResult evaluate(const FeatureDataset& dataset, const EvalConfig& config) {
  validate(dataset, config);
  const auto subjects = subjects_of(dataset);
  std::vector<Fold> folds = loso_folds(subjects);
  check_fold_partition(folds, subjects);
  Prepared prepared;
  prepared.ensembles.resize(dataset.sequences.size());
  prepared.raw.resize(dataset.sequences.size());
  for (std::size_t i = 0; i < dataset.sequences.size(); ++i) prepare_one(dataset, config, i, prepared);
  std::vector<std::vector<SequencePrediction>> per_fold;
  for (const Fold& fold : folds) per_fold.push_back(run_fold(dataset, config, prepared, fold));
  return assemble(dataset, std::move(folds), std::move(per_fold));
}

}  // namespace serial
}  // namespace hankel
