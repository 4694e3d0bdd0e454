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

#include "hankel/cli.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hankel/cache.hpp"
#include "hankel/error.hpp"
#include "hankel/hashing.hpp"
#include "hankel/report.hpp"
#include "hankel/synth_bench.hpp"

namespace hankel {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIngestion, "cannot write '" + path.string() + "'");
  out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void apply_jobs(const RunConfig& config) {
  if (config.jobs > 0) omp_set_num_threads(config.jobs);
}

std::filesystem::path cache_path(const RunConfig& config, const InputHashes& hashes) {
  return config.cache_dir / ("features-" + hashes.feature_key.substr(0, 16) + ".bin");
}

struct LoadedFeatures {
  DatasetManifest manifest;
  InputHashes hashes;
  ExtractOutcome outcome;
  FeatureDataset dataset;
};

LoadedFeatures ensure_features(const RunConfig& config, std::ostream& log, bool need_dataset) {
  if (config.manifest.empty()) throw Error(ErrorCode::kInvalidArgument, "--manifest is required");
  const ExtractionConfig extraction = config.extraction();
  extraction.validate();
  LoadedFeatures loaded{load_manifest(config.manifest, SystemOrder(config.order)), {}, {}, {}};
  loaded.hashes = hash_inputs(loaded.manifest, extraction);
  loaded.outcome.cache_file = cache_path(config, loaded.hashes);
  loaded.outcome.sequences = loaded.manifest.entries.size();
  loaded.outcome.channels_per_sequence = extraction.kinds.size() * extraction.scales.size();

  const auto existing = peek_feature_cache_key(loaded.outcome.cache_file);
  if (existing && *existing == loaded.hashes.feature_key) {
    loaded.outcome.cache_hit = true;
    log << "feature cache hit: " << loaded.outcome.cache_file.string() << "\n";
    if (need_dataset) loaded.dataset = load_feature_cache(loaded.outcome.cache_file).dataset;
    return loaded;
  }
  log << "extracting " << loaded.manifest.entries.size() << " sequences ("
      << loaded.outcome.channels_per_sequence << " channels each)\n";
  loaded.dataset = extract_dataset(loaded.manifest, extraction);
  loaded.outcome.degenerate_windows = loaded.dataset.degenerate_windows;
  if (loaded.dataset.degenerate_windows > 0) {
    log << "warning: " << loaded.dataset.degenerate_windows
        << " degenerate windows replaced by 0\n";
  }
  save_feature_cache(loaded.outcome.cache_file, loaded.dataset, loaded.hashes.feature_key);
  log << "feature cache written: " << loaded.outcome.cache_file.string() << "\n";
  return loaded;
}

std::vector<HaarKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<HaarKind> kinds;
  for (const std::string& name : names) {
    const auto kind = parse_haar_kind(name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown Haar kind '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

std::string synth_table(const SynthBenchReport& report) {
  std::string out = "noise     Hankel + NN   DTW + NN\n";
  for (const SynthLevelResult& level : report.levels) {
    char line[96];
    std::snprintf(line, sizeof line, "%-8.3f  %11.1f  %9.1f\n", level.noise_level,
                  level.hankel.report.average, level.dtw.report.average);
    out += line;
  }
  return out;
}

}  // namespace

ExtractionConfig RunConfig::extraction() const {
  ExtractionConfig config;
  config.kinds = kinds;
  config.scales = scales;
  config.step = step;
  return config;
}

EvalConfig RunConfig::evaluation() const {
  EvalConfig config;
  config.method = method;
  config.kinds = kinds;
  config.order = SystemOrder(order);
  return config;
}

nlohmann::json RunConfig::to_json() const {
  std::vector<std::string> kind_names;
  for (HaarKind k : kinds) kind_names.emplace_back(to_string(k));
  return {{"method", std::string(to_string(method))},
          {"kinds", kind_names},
          {"scales", scales},
          {"step", step},
          {"order", order},
          {"manifest", manifest.string()},
          {"cache_dir", cache_dir.string()},
          {"out_dir", out_dir.string()},
          {"bench_spec", bench_spec.string()},
          {"seed", seed},
          {"jobs", jobs}};
}

InputHashes hash_inputs(const DatasetManifest& manifest, const ExtractionConfig& config) {
  InputHashes hashes;
  hashes.manifest_sha256 = sha256_file(manifest.source);
  Sha256 frames;
  for (const ManifestEntry& entry : manifest.entries) {
    for (const auto& path : entry.frames) frames.update(sha256_file(path));
  }
  hashes.frames_sha256 = frames.hex_digest();
  std::vector<int> kind_ids;
  for (HaarKind k : config.kinds) kind_ids.push_back(static_cast<int>(k));
  const nlohmann::json extraction = {{"cache_version", kFeatureCacheVersion},
                                     {"kinds", kind_ids},
                                     {"scales", config.scales},
                                     {"step", config.step}};
  hashes.feature_key =
      sha256_hex(hashes.manifest_sha256 + hashes.frames_sha256 + extraction.dump());
  return hashes;
}

ExtractOutcome cmd_extract(const RunConfig& config, std::ostream& log) {
  apply_jobs(config);
  return ensure_features(config, log, false).outcome;
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
  apply_jobs(config);
  LoadedFeatures loaded = ensure_features(config, log, true);
  const EvalConfig eval_config = config.evaluation();
  log << "evaluating " << to_string(config.method) << " on "
      << loaded.dataset.sequences.size() << " sequences\n";
  const EvaluationResult result = evaluate(loaded.dataset, eval_config);

  std::filesystem::create_directories(config.out_dir);
  const nlohmann::json resolved = config.to_json();
  write_text(config.out_dir / "config.json",
             dump({{"command", "evaluate"},
                   {"config", resolved},
                   {"config_sha256", sha256_hex(resolved.dump())},
                   {"inputs",
                    {{"manifest_sha256", loaded.hashes.manifest_sha256},
                     {"frames_sha256", loaded.hashes.frames_sha256},
                     {"feature_key", loaded.hashes.feature_key}}}}));
  write_text(config.out_dir / "report.json",
             dump(report_json(result, loaded.dataset.labels, eval_config)));
  write_text(config.out_dir / "report.txt",
             accuracy_table(result, loaded.dataset.labels, eval_config) + "\n" +
                 confusion_table(result.matrix, loaded.dataset.labels));
  std::string lines;
  for (const SequencePrediction& p : result.predictions) {
    lines += prediction_json(p, loaded.dataset.labels).dump() + "\n";
  }
  write_text(config.out_dir / "predictions.jsonl", lines);
  log << accuracy_table(result, loaded.dataset.labels, eval_config);
}

void cmd_synth_bench(const RunConfig& config, std::ostream& log) {
  apply_jobs(config);
  const SynthBenchSpec spec =
      config.bench_spec.empty() ? SynthBenchSpec{} : SynthBenchSpec::load(config.bench_spec);
  spec.validate();
  const SynthBenchReport report = run_synth_bench(spec, config.seed);
  std::filesystem::create_directories(config.out_dir);
  const nlohmann::json resolved = config.to_json();
  nlohmann::json inputs = {{"spec", spec.to_json()}};
  if (!config.bench_spec.empty()) inputs["spec_sha256"] = sha256_file(config.bench_spec);
  write_text(config.out_dir / "config.json",
             dump({{"command", "synth-bench"},
                   {"config", resolved},
                   {"config_sha256", sha256_hex(resolved.dump())},
                   {"inputs", inputs}}));
  write_text(config.out_dir / "synth_report.json",
             dump(synth_report_json(spec, config.seed, report)));
  const std::string table = synth_table(report);
  write_text(config.out_dir / "synth_report.txt", table);
  log << table;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hankel-ensemble dynamics classifier for image sequences", "hankel"};
  app.set_config("--config", "", "Read flags from a TOML/INI config file");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string method = "hankel";
  std::vector<std::string> kinds;
  std::string manifest;
  std::string cache_dir = config.cache_dir.string();
  std::string out_dir = config.out_dir.string();
  std::string bench_spec;

  app.add_option("--manifest", manifest, "Dataset manifest (JSON Lines)");
  app.add_option("--method", method, "Classifier: hankel or dtw")
      ->check(CLI::IsMember({"hankel", "dtw"}));
  app.add_option("--kinds", kinds, "Comma-separated Haar kinds (default: all six)")->delimiter(',');
  app.add_option("--scales", config.scales, "Comma-separated window scales")->delimiter(',');
  app.add_option("--step", config.step, "Grid step as a fraction of the face region");
  app.add_option("--order", config.order, "Hankel order n (n + 1 block rows)");
  app.add_option("--cache-dir", cache_dir, "Feature cache directory");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--bench-spec", bench_spec, "Synthetic benchmark spec (JSON)");
  app.add_option("--seed", config.seed, "Seed for synthetic data");
  app.add_option("--jobs", config.jobs, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* extract = app.add_subcommand("extract", "Extract features into the cache");
  auto* eval = app.add_subcommand("evaluate", "Leave-one-subject-out evaluation");
  auto* synth = app.add_subcommand("synth-bench", "Synthetic LTI benchmark, both methods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code_for(ErrorCategory::kUsage);
  }

  try {
    config.method = *parse_method(method);
    if (!kinds.empty()) config.kinds = parse_kinds(kinds);
    config.manifest = manifest;
    config.cache_dir = cache_dir;
    config.out_dir = out_dir;
    config.bench_spec = bench_spec;
    if (*extract) {
      const ExtractOutcome outcome = cmd_extract(config, err);
      out << (outcome.cache_hit ? "cache hit " : "extracted ") << outcome.sequences
          << " sequences -> " << outcome.cache_file.string() << "\n";
    } else if (*eval) {
      cmd_evaluate(config, out);
    } else if (*synth) {
      cmd_synth_bench(config, out);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [io]: " << e.what() << "\n";
    return exit_code_for(ErrorCategory::kIngestion);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(ErrorCategory::kComputation);
  }
  return 0;
}

}  // namespace hankel
