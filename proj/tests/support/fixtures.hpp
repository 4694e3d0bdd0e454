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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hankel/image.hpp"
#include "hankel/image_io.hpp"

namespace hankel::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hankel-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

/// A 48x48 frame whose 40x40 face area holds a bright blob moving along a
/// class-specific trajectory; `phase` shifts the trajectory per subject.
inline GrayImage moving_blob_frame(int label, int t, double phase) {
  GrayImage image(48, 48);
  const double angle = 0.45 * (label + 1) * t + phase;
  const double cx = 24.0 + (6.0 + 3.0 * label) * std::cos(angle);
  const double cy = 24.0 + (6.0 + 2.0 * label) * std::sin((label + 1) * angle);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 48; ++x) {
      const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      image.at(x, y) = std::round(40.0 + 180.0 * std::exp(-d2 / 40.0) + (x + y) % 7);
    }
  }
  return image;
}

struct TinyDataset {
  std::filesystem::path manifest;
  int sequences = 0;
};

/// Writes PNG frames and a manifest: `subjects` x `labels` sequences of
/// `frames` frames each.
inline TinyDataset write_tiny_dataset(const std::filesystem::path& dir, int subjects, int labels,
                                      int frames) {
  std::vector<std::string> names;
  for (int l = 0; l < labels; ++l) names.push_back("class" + std::to_string(l));
  std::string manifest =
      nlohmann::json{{"format", "hankel-manifest"}, {"version", 1}, {"labels", names}}.dump() + "\n";
  TinyDataset out;
  for (int s = 0; s < subjects; ++s) {
    for (int l = 0; l < labels; ++l) {
      const std::string id = "s" + std::to_string(s) + "_c" + std::to_string(l);
      std::filesystem::create_directories(dir / id);
      nlohmann::json frame_list = nlohmann::json::array();
      for (int t = 0; t < frames; ++t) {
        const std::string rel = id + "/f" + std::to_string(t) + ".png";
        save_gray_image(dir / rel, moving_blob_frame(l, t, 0.7 * s));
        frame_list.push_back(rel);
      }
      manifest += nlohmann::json{{"id", id},
                                 {"subject", "subj" + std::to_string(s)},
                                 {"label", names[static_cast<std::size_t>(l)]},
                                 {"frames", frame_list},
                                 {"region", {4, 4, 40, 40}}}
                      .dump() +
                  "\n";
      ++out.sequences;
    }
  }
  out.manifest = dir / "manifest.jsonl";
  write_file(out.manifest, manifest);
  return out;
}

}  // namespace hankel::testing
