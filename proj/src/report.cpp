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

#include "hankel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>

#include "hankel/error.hpp"

namespace hankel {
namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : std::string(width - text.size(), ' ') + text;
}

std::string pad_right(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int labels)
    : size_(labels), counts_(static_cast<std::size_t>(labels) * static_cast<std::size_t>(labels), 0) {
  if (labels < 0) throw Error(ErrorCode::kInvalidArgument, "negative label count");
}

long ConfusionMatrix::count(LabelIndex truth, LabelIndex predicted) const {
  return counts_.at(static_cast<std::size_t>(truth) * static_cast<std::size_t>(size_) +
                    static_cast<std::size_t>(predicted));
}

void ConfusionMatrix::add(LabelIndex truth, LabelIndex predicted) {
  if (truth < 0 || truth >= size_ || predicted < 0 || predicted >= size_) {
    throw Error(ErrorCode::kInvalidArgument, "label outside the confusion matrix vocabulary");
  }
  ++counts_[static_cast<std::size_t>(truth) * static_cast<std::size_t>(size_) +
            static_cast<std::size_t>(predicted)];
}

long ConfusionMatrix::row_total(LabelIndex truth) const {
  long sum = 0;
  for (LabelIndex p = 0; p < size_; ++p) sum += count(truth, p);
  return sum;
}

long ConfusionMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0L); }

double ConfusionMatrix::row_percent(LabelIndex truth, LabelIndex predicted) const {
  const long row = row_total(truth);
  return row == 0 ? 0.0 : 100.0 * static_cast<double>(count(truth, predicted)) / static_cast<double>(row);
}

ConfusionMatrix confusion(std::span<const LabelIndex> predicted,
                          std::span<const LabelIndex> truth, int labels) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction and truth lists differ in length");
  }
  ConfusionMatrix matrix(labels);
  for (std::size_t i = 0; i < predicted.size(); ++i) matrix.add(truth[i], predicted[i]);
  return matrix;
}

AccuracyReport accuracy_report(const ConfusionMatrix& matrix, std::vector<FoldSummary> folds) {
  AccuracyReport report;
  report.per_class.resize(static_cast<std::size_t>(matrix.size()));
  double sum = 0.0;
  int present = 0;
  for (LabelIndex c = 0; c < matrix.size(); ++c) {
    if (matrix.row_total(c) == 0) continue;
    const double accuracy = matrix.row_percent(c, c);
    report.per_class[static_cast<std::size_t>(c)] = accuracy;
    sum += accuracy;
    ++present;
  }
  report.average = present == 0 ? 0.0 : sum / present;
  report.folds = std::move(folds);
  return report;
}

std::string method_label(Method method) {
  return method == Method::kHankel ? "Hankel + NN" : "DTW + NN";
}

nlohmann::json report_json(const EvaluationResult& result, const LabelVocabulary& labels,
                           const EvalConfig& config) {
  using nlohmann::json;
  json per_class = json::object();
  for (LabelIndex c = 0; c < labels.size(); ++c) {
    const auto& value = result.report.per_class[static_cast<std::size_t>(c)];
    per_class[labels.name(c)] = value ? json(*value) : json(nullptr);
  }
  json counts = json::array();
  json percent = json::array();
  for (LabelIndex t = 0; t < labels.size(); ++t) {
    json count_row = json::array();
    json percent_row = json::array();
    for (LabelIndex p = 0; p < labels.size(); ++p) {
      count_row.push_back(result.matrix.count(t, p));
      percent_row.push_back(result.matrix.row_percent(t, p));
    }
    counts.push_back(std::move(count_row));
    percent.push_back(std::move(percent_row));
  }
  json folds = json::array();
  for (const FoldSummary& f : result.report.folds) {
    folds.push_back({{"subject", f.subject}, {"tested", f.tested}, {"correct", f.correct}});
  }
  return {
      {"method", std::string(to_string(config.method))},
      {"features", kinds_label(config.kinds)},
      {"order", config.order.value()},
      {"labels", labels.names()},
      {"sequences", result.predictions.size()},
      {"accuracy", {{"per_class", per_class}, {"average", result.report.average}}},
      {"confusion", {{"rows", "true"}, {"columns", "predicted"}, {"counts", counts},
                     {"row_percent", percent}}},
      {"folds", folds},
  };
}

nlohmann::json prediction_json(const SequencePrediction& p, const LabelVocabulary& labels) {
  using nlohmann::json;
  json tally = json::object();
  for (LabelIndex l = 0; l < labels.size(); ++l) {
    tally[labels.name(l)] = p.prediction.tally[static_cast<std::size_t>(l)];
  }
  json channels = json::array();
  for (const ChannelVote& v : p.prediction.votes) {
    channels.push_back({{"kind", std::string(to_string(v.key.kind))},
                        {"scale", v.key.scale_index},
                        {"label", v.label ? json(labels.name(*v.label)) : json(nullptr)},
                        {"score", v.score},
                        {"neighbor", v.neighbor_id}});
  }
  return {{"id", p.id},
          {"subject", p.subject},
          {"truth", labels.name(p.truth)},
          {"predicted", labels.name(p.prediction.label)},
          {"tie_break", p.prediction.tie_break},
          {"tally", tally},
          {"channels", channels}};
}

std::string accuracy_table(const EvaluationResult& result, const LabelVocabulary& labels,
                           const EvalConfig& config) {
  const std::string features = kinds_label(config.kinds);
  const std::size_t feature_width = std::max<std::size_t>(8, features.size());
  constexpr std::size_t kCell = 9;
  std::string header = pad_right("Features", feature_width) + "  " + pad_right("Method", 11);
  std::string row = pad_right(features, feature_width) + "  " + pad_right(method_label(config.method), 11);
  for (LabelIndex c = 0; c < labels.size(); ++c) {
    std::string name = labels.name(c);
    if (name.size() > kCell - 1) name = name.substr(0, kCell - 2) + ".";
    header += pad(name, kCell);
    const auto& value = result.report.per_class[static_cast<std::size_t>(c)];
    row += pad(value ? fixed(*value, 1) : "-", kCell);
  }
  header += pad("Avg", kCell);
  row += pad(fixed(result.report.average, 1), kCell);
  return header + "\n" + row + "\n";
}

std::string confusion_table(const ConfusionMatrix& matrix, const LabelVocabulary& labels) {
  std::size_t width = 10;
  for (const std::string& name : labels.names()) width = std::max(width, name.size() + 2);
  std::string out = pad_right("Tr. vs Pr.", width);
  for (const std::string& name : labels.names()) out += pad(name, width);
  out += "\n";
  for (LabelIndex t = 0; t < labels.size(); ++t) {
    out += pad_right(labels.name(t), width);
    for (LabelIndex p = 0; p < labels.size(); ++p) out += pad(fixed(matrix.row_percent(t, p), 2), width);
    out += "\n";
  }
  return out;
}

}  // namespace hankel
