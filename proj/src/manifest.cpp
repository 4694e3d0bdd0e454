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
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hankel/error.hpp"
#include "hankel/eval.hpp"

namespace hankel {
namespace {

using nlohmann::json;

std::optional<FaceRegion> parse_region(const json& value, std::string& problem) {
  if (!value.is_array() || value.size() != 4 ||
      !std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_number_integer(); })) {
    problem = "region must be [x, y, w, h] integers";
    return std::nullopt;
  }
  FaceRegion r{value[0].get<int>(), value[1].get<int>(), value[2].get<int>(), value[3].get<int>()};
  if (r.x < 0 || r.y < 0 || r.width < 10 || r.height < 10) {
    problem = "region must have x, y >= 0 and w, h >= 10";
    return std::nullopt;
  }
  return r;
}

}  // namespace

DatasetManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir,
                               SystemOrder order, std::string_view source_name) {
  std::vector<std::string> issues;
  auto report = [&](int line, const std::string& what) {
    issues.push_back("line " + std::to_string(line) + ": " + what);
  };

  DatasetManifest manifest;
  bool have_header = false;
  std::set<std::string> ids;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      report(line_no, std::string("malformed JSON: ") + e.what());
      continue;
    }
    if (!record.is_object()) {
      report(line_no, "expected a JSON object");
      continue;
    }
    if (!have_header) {
      have_header = true;
      if (record.value("format", std::string()) != "hankel-manifest") {
        report(line_no, "missing header {\"format\": \"hankel-manifest\", ...}");
        break;
      }
      if (!record.contains("version") || record["version"] != kManifestVersion) {
        report(line_no, "unsupported manifest version (expected " +
                            std::to_string(kManifestVersion) + ")");
        break;
      }
      try {
        manifest.labels = record.contains("labels")
                              ? LabelVocabulary(record["labels"].get<std::vector<std::string>>())
                              : LabelVocabulary::ck_plus();
      } catch (const std::exception& e) {
        report(line_no, std::string("bad label list: ") + e.what());
        break;
      }
      continue;
    }

    ManifestEntry entry;
    const std::size_t issues_before = issues.size();
    try {
      entry.id = record.at("id").get<std::string>();
      entry.subject = record.at("subject").get<std::string>();
      const auto label_name = record.at("label").get<std::string>();
      for (const auto& f : record.at("frames")) entry.frames.push_back(f.get<std::string>());
      if (const auto label = manifest.labels.index_of(label_name)) {
        entry.label = *label;
      } else {
        report(line_no, "unknown label '" + label_name + "' for sequence '" + entry.id + "'");
      }
    } catch (const json::exception& e) {
      report(line_no, std::string("missing or mistyped field: ") + e.what());
      continue;
    }
    if (entry.id.empty()) report(line_no, "empty sequence id");
    if (entry.subject.empty()) report(line_no, "empty subject id for '" + entry.id + "'");
    if (!entry.id.empty() && !ids.insert(entry.id).second) {
      report(line_no, "duplicate sequence id '" + entry.id + "'");
    }
    if (static_cast<int>(entry.frames.size()) < order.block_rows()) {
      report(line_no, "sequence-too-short: '" + entry.id + "' has " +
                          std::to_string(entry.frames.size()) + " frames, order " +
                          std::to_string(order.value()) + " needs " +
                          std::to_string(order.block_rows()));
    }
    std::set<std::filesystem::path> missing;
    for (auto& frame : entry.frames) {
      if (frame.is_relative()) frame = base_dir / frame;
      if (!std::filesystem::is_regular_file(frame) && missing.insert(frame).second) {
        report(line_no, "missing frame '" + frame.string() + "'");
      }
    }
    std::string problem;
    if (record.contains("region") == record.contains("regions")) {
      report(line_no, "give exactly one of \"region\" or \"regions\" for '" + entry.id + "'");
    } else if (record.contains("region")) {
      if (auto r = parse_region(record["region"], problem)) {
        entry.regions.push_back(*r);
      } else {
        report(line_no, problem);
      }
    } else {
      const json& boxes = record["regions"];
      if (!boxes.is_array() || boxes.size() != entry.frames.size()) {
        report(line_no, "\"regions\" needs one box per frame for '" + entry.id + "'");
      } else {
        for (const json& box : boxes) {
          if (auto r = parse_region(box, problem)) {
            entry.regions.push_back(*r);
          } else {
            report(line_no, problem);
            break;
          }
        }
      }
    }
    if (issues.size() == issues_before) manifest.entries.push_back(std::move(entry));
  }

  if (!have_header) issues.push_back("manifest has no header line");
  if (issues.empty() && manifest.entries.empty()) issues.push_back("manifest lists no sequences");
  if (!issues.empty()) {
    std::ostringstream message;
    message << "manifest " << source_name << " rejected (" << issues.size() << " issue"
            << (issues.size() == 1 ? "" : "s") << "):";
    for (const std::string& issue : issues) message << "\n  " << issue;
    throw Error(ErrorCode::kIngestion, message.str());
  }
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path, SystemOrder order) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIngestion, "cannot open manifest '" + path.string() + "'");
  DatasetManifest manifest = parse_manifest(in, path.parent_path(), order, path.string());
  manifest.source = path;
  return manifest;
}

ManifestSummary summarize(const DatasetManifest& manifest) {
  ManifestSummary summary;
  summary.sequences = manifest.entries.size();
  summary.class_counts.assign(static_cast<std::size_t>(manifest.labels.size()), 0);
  std::set<std::string> subjects;
  for (const ManifestEntry& e : manifest.entries) {
    subjects.insert(e.subject);
    ++summary.class_counts[static_cast<std::size_t>(e.label)];
  }
  summary.subjects = subjects.size();
  return summary;
}

std::vector<Fold> loso_folds(std::span<const std::string> subjects) {
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < subjects.size(); ++i) by_subject[subjects[i]].push_back(i);
  if (by_subject.size() < 2) {
    throw Error(ErrorCode::kProtocol,
                "leave-one-subject-out needs at least two subjects, got " +
                    std::to_string(by_subject.size()));
  }
  std::vector<Fold> folds;
  folds.reserve(by_subject.size());
  for (const auto& [subject, test] : by_subject) {
    Fold fold{subject, test, {}};
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      if (subjects[i] != subject) fold.train.push_back(i);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<Fold> loso_folds(const DatasetManifest& manifest) {
  std::vector<std::string> subjects;
  subjects.reserve(manifest.entries.size());
  for (const ManifestEntry& e : manifest.entries) subjects.push_back(e.subject);
  return loso_folds(subjects);
}

void check_fold_partition(std::span<const Fold> folds, std::span<const std::string> subjects) {
  std::vector<int> tested(subjects.size(), 0);
  for (const Fold& fold : folds) {
    std::set<std::string> test_subjects;
    for (std::size_t i : fold.test) {
      if (i >= subjects.size()) throw Error(ErrorCode::kProtocol, "fold index out of range");
      ++tested[i];
      test_subjects.insert(subjects[i]);
    }
    for (std::size_t i : fold.train) {
      if (i >= subjects.size() || test_subjects.count(subjects[i]) != 0) {
        throw Error(ErrorCode::kProtocol,
                    "subject leakage in fold '" + fold.held_out_subject + "'");
      }
    }
    if (fold.test.size() + fold.train.size() != subjects.size()) {
      throw Error(ErrorCode::kProtocol,
                  "fold '" + fold.held_out_subject + "' does not cover every sequence");
    }
  }
  if (std::any_of(tested.begin(), tested.end(), [](int n) { return n != 1; })) {
    throw Error(ErrorCode::kProtocol, "test sets do not partition the sequences");
  }
}

}  // namespace hankel
