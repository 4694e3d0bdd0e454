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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hankel/appearance.hpp"
#include "hankel/eval.hpp"

namespace hankel {

/// Everything that determines a run. Serialized into every output
/// directory so a run can be reproduced from its own outputs.
struct RunConfig {
  Method method = Method::kHankel;
  std::vector<HaarKind> kinds{kAllHaarKinds.begin(), kAllHaarKinds.end()};
  std::vector<double> scales{kDefaultScales.begin(), kDefaultScales.end()};
  double step = kDefaultGridStep;
  int order = 2;
  std::filesystem::path manifest;
  std::filesystem::path cache_dir = ".hankel-cache";
  std::filesystem::path out_dir = "hankel-out";
  std::filesystem::path bench_spec;  // synth-bench only; empty = defaults
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = all cores

  ExtractionConfig extraction() const;
  EvalConfig evaluation() const;
  nlohmann::json to_json() const;
};

struct InputHashes {
  std::string manifest_sha256;
  std::string frames_sha256;  // all frame files in manifest order
  std::string feature_key;    // inputs + extraction settings
};

InputHashes hash_inputs(const DatasetManifest& manifest, const ExtractionConfig& config);

struct ExtractOutcome {
  std::filesystem::path cache_file;
  bool cache_hit = false;
  std::size_t sequences = 0;
  std::size_t channels_per_sequence = 0;
  long degenerate_windows = 0;
};

/// Extracts features into the cache directory; skips work when a cache with
/// the same key exists.
ExtractOutcome cmd_extract(const RunConfig& config, std::ostream& log);

/// Writes config.json, report.json, report.txt and predictions.jsonl.
void cmd_evaluate(const RunConfig& config, std::ostream& log);

/// Writes config.json, synth_report.json and synth_report.txt.
void cmd_synth_bench(const RunConfig& config, std::ostream& log);

/// Entry point: `hankel <extract|evaluate|synth-bench> [flags]`. Returns the
/// process exit code: 0 success, 1 usage, 2 ingestion, 3 protocol,
/// 4 computation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hankel
