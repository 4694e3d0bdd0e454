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

#include <string>

#include <json.hpp>

#include "hankel/eval.hpp"

namespace hankel {

/// Machine-readable accuracy report and confusion matrix.
nlohmann::json report_json(const EvaluationResult& result, const LabelVocabulary& labels,
                           const EvalConfig& config);

/// One line of the per-sequence prediction log.
nlohmann::json prediction_json(const SequencePrediction& p, const LabelVocabulary& labels);

/// Per-class accuracy row laid out like a results table:
/// features | method | one column per class | Avg.
std::string accuracy_table(const EvaluationResult& result, const LabelVocabulary& labels,
                           const EvalConfig& config);

/// Row-normalized confusion matrix in percent, true labels on rows.
std::string confusion_table(const ConfusionMatrix& matrix, const LabelVocabulary& labels);

std::string method_label(Method method);

}  // namespace hankel
