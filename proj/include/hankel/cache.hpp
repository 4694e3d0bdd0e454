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
#include <string>

#include "hankel/dynamics.hpp"
#include "hankel/eval.hpp"

namespace hankel {

// Binary formats, little-endian, IEEE-754 doubles stored bit for bit.
// Strings are u32 length + bytes.
//
// Feature cache, version 1:
//   magic "HKFEAT01" | u32 version | string key | u32 label count | labels
//   u32 sequence count, then per sequence:
//     string id | string subject | i32 label | u32 channel count
//     per channel: u32 kind | u32 scale index | u32 T | u32 dim
//                  | T * dim f64, frame-major (frame t, entries 0..dim-1)
//
// Ensemble, version 1:
//   magic "HKENSM01" | u32 version | string id | string subject
//   | u8 has label [| string label] | u32 order n | u32 channel count
//   per channel: u32 kind | u32 scale | u32 n | u32 r | u32 v | u32 c
//                | u8 informative | r * v * c f64 row-major (informative only;
//                c = 0 otherwise)

inline constexpr std::uint32_t kFeatureCacheVersion = 1;
inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

void write_feature_cache(std::ostream& out, const FeatureDataset& dataset, const std::string& key);

struct FeatureCache {
  std::string key;
  FeatureDataset dataset;
};

/// Throws kFormat on a bad magic, version or truncated stream.
FeatureCache read_feature_cache(std::istream& in);

/// Reads only the key; empty if the file is missing or not a feature cache.
std::optional<std::string> peek_feature_cache_key(const std::filesystem::path& path);

void save_feature_cache(const std::filesystem::path& path, const FeatureDataset& dataset,
                        const std::string& key);
FeatureCache load_feature_cache(const std::filesystem::path& path);

void write_ensemble(std::ostream& out, const EnsembleRepresentation& ensemble);
EnsembleRepresentation read_ensemble(std::istream& in);

}  // namespace hankel
