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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hankel/image.hpp"
#include "hankel/time_series.hpp"

namespace hankel {

/// The six Haar-like layouts. Every layout splits its window into a white
/// and a black part which together cover the window.
enum class HaarKind : std::uint8_t {
  kEdgeHorizontal = 0,  // top half white, bottom half black
  kEdgeVertical = 1,    // left half white, right half black
  kLineHorizontal = 2,  // three horizontal bands, middle black
  kLineVertical = 3,    // three vertical bands, middle black
  kDiagonal = 4,        // 2x2 checkerboard, main diagonal white
  kCenterSurround = 5,  // centered inner third black, surround white
};

inline constexpr std::array<HaarKind, 6> kAllHaarKinds = {
    HaarKind::kEdgeHorizontal, HaarKind::kEdgeVertical, HaarKind::kLineHorizontal,
    HaarKind::kLineVertical,   HaarKind::kDiagonal,     HaarKind::kCenterSurround};

inline constexpr std::array<double, 5> kDefaultScales = {0.30, 0.35, 0.40, 0.50, 0.60};
inline constexpr double kDefaultGridStep = 0.10;

std::string_view to_string(HaarKind kind);
/// Accepts the names produced by to_string or the numeric id "0".."5".
std::optional<HaarKind> parse_haar_kind(std::string_view text);

/// Face bounding box in image coordinates.
struct FaceRegion {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  Rect rect() const { return {x, y, width, height}; }
  friend bool operator==(const FaceRegion&, const FaceRegion&) = default;
};

/// Throws kInvalidRegion unless the region lies inside `image` and is at
/// least 10x10 pixels.
void validate_region(const FaceRegion& region, const GrayImage& image);

/// Grid point relative to the face region origin.
struct GridPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct SamplingGrid {
  int per_axis = 0;
  std::vector<GridPoint> points;  // row-major: y outer, x inner
};

struct WindowSpec {
  GridPoint center;  // relative to the region origin
  int nominal_side = 0;
  Rect effective;  // absolute image coordinates, already cropped to the region
};

/// Round half up to the nearest integer, tolerant to representation error
/// in products such as 25 * 0.1.
int round_half_up(double value);

/// Points at round(k * step * w), round(k * step * h) for k = 1 .. K where
/// K = ceil(1 / step) - 1 (9 for the default step, giving 81 points).
SamplingGrid sample_grid(const FaceRegion& region, double step_frac = kDefaultGridStep);

/// Square window of side round(scale * min(w, h)) centered at `center`,
/// intersected with the region.
WindowSpec window_at(GridPoint center, double scale_frac, const FaceRegion& region);

/// mean(white) - mean(black) over the effective window. Split points are
/// proportional to the effective rect. Throws kDegenerateWindow when a side is
/// shorter than 2 px (two-way layouts) or 3 px (three-way layouts).
double haar_value(const IntegralImage& ii, const WindowSpec& window, HaarKind kind);

struct ChannelKey {
  HaarKind kind = HaarKind::kEdgeHorizontal;
  int scale_index = 0;

  friend auto operator<=>(const ChannelKey&, const ChannelKey&) = default;
};

std::string to_string(const ChannelKey& key);

/// One time series per (kind, scale) channel; sample t is the grid vector of
/// frame t.
struct FeatureChannelSeries {
  ChannelKey key;
  TimeSeries series;
};

struct ExtractionConfig {
  std::vector<HaarKind> kinds{kAllHaarKinds.begin(), kAllHaarKinds.end()};
  std::vector<double> scales{kDefaultScales.begin(), kDefaultScales.end()};
  double step = kDefaultGridStep;

  void validate() const;
};

struct ExtractionResult {
  std::vector<FeatureChannelSeries> channels;  // ordered by ChannelKey
  long degenerate_windows = 0;                 // substituted with 0
};

/// Extracts every configured channel from a frame sequence. `regions` holds
/// either one region for all frames or one region per frame. Frames are
/// processed in parallel.
ExtractionResult extract_sequence(std::span<const GrayImage> frames,
                                  std::span<const FaceRegion> regions,
                                  const ExtractionConfig& config);

namespace serial {

/// Single-threaded reference for extract_sequence; results are identical.
ExtractionResult extract_sequence(std::span<const GrayImage> frames,
                                  std::span<const FaceRegion> regions,
                                  const ExtractionConfig& config);

}  // namespace serial
}  // namespace hankel
