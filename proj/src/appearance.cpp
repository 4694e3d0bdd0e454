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

#include "hankel/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "hankel/error.hpp"

namespace hankel {
namespace {

int split_half(int len) { return round_half_up(len / 2.0); }
int split_third(int len) { return round_half_up(len / 3.0); }
int split_two_thirds(int len) { return round_half_up(2.0 * len / 3.0); }

double mean_of_pair(const IntegralImage& ii, const Rect& a, const Rect& b) {
  return (ii.sum(a) + ii.sum(b)) / static_cast<double>(a.area() + b.area());
}

double mean_of(const IntegralImage& ii, const Rect& r) {
  return ii.sum(r) / static_cast<double>(r.area());
}

bool is_three_way(HaarKind kind) {
  return kind == HaarKind::kLineHorizontal || kind == HaarKind::kLineVertical ||
         kind == HaarKind::kCenterSurround;
}

std::vector<ChannelKey> channel_keys(const ExtractionConfig& config) {
  std::vector<HaarKind> kinds = config.kinds;
  std::sort(kinds.begin(), kinds.end());
  std::vector<ChannelKey> keys;
  keys.reserve(kinds.size() * config.scales.size());
  for (HaarKind kind : kinds) {
    for (int j = 0; j < static_cast<int>(config.scales.size()); ++j) keys.push_back({kind, j});
  }
  return keys;
}

struct PreparedSequence {
  std::vector<ChannelKey> keys;
  std::vector<SamplingGrid> grids;  // one per frame
  int dim = 0;
};

const FaceRegion& region_for(std::span<const FaceRegion> regions, std::size_t t) {
  return regions.size() == 1 ? regions[0] : regions[t];
}

PreparedSequence prepare(std::span<const GrayImage> frames, std::span<const FaceRegion> regions,
                         const ExtractionConfig& config) {
  config.validate();
  if (frames.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a sequence needs at least one frame");
  }
  if (regions.size() != 1 && regions.size() != frames.size()) {
    throw Error(ErrorCode::kInvalidRegion,
                "expected 1 or " + std::to_string(frames.size()) + " face regions, got " +
                    std::to_string(regions.size()));
  }
  PreparedSequence prepared;
  prepared.keys = channel_keys(config);
  prepared.grids.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const FaceRegion& region = region_for(regions, t);
    try {
      validate_region(region, frames[t]);
    } catch (const Error& e) {
      throw Error(e.code(), "frame " + std::to_string(t) + ": " + e.what());
    }
    prepared.grids.push_back(sample_grid(region, config.step));
  }
  prepared.dim = prepared.grids.front().per_axis * prepared.grids.front().per_axis;
  return prepared;
}

std::vector<FeatureChannelSeries> allocate(const PreparedSequence& prepared, int frames) {
  std::vector<FeatureChannelSeries> out;
  out.reserve(prepared.keys.size());
  for (const ChannelKey& key : prepared.keys) {
    out.push_back({key, TimeSeries(Eigen::MatrixXd::Zero(prepared.dim, frames))});
  }
  return out;
}

// Fills column t of every channel. Returns the number of degenerate windows.
long extract_frame(const GrayImage& frame, const FaceRegion& region, const SamplingGrid& grid,
                   const ExtractionConfig& config, int t,
                   std::vector<FeatureChannelSeries>& channels) {
  const IntegralImage ii(frame);
  long degenerate = 0;
  for (FeatureChannelSeries& channel : channels) {
    const double scale = config.scales[static_cast<std::size_t>(channel.key.scale_index)];
    for (std::size_t p = 0; p < grid.points.size(); ++p) {
      const WindowSpec window = window_at(grid.points[p], scale, region);
      double value = 0.0;
      try {
        value = haar_value(ii, window, channel.key.kind);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateWindow) throw;
        ++degenerate;
      }
      channel.series.samples(static_cast<Eigen::Index>(p), t) = value;
    }
  }
  return degenerate;
}

}  // namespace

std::string_view to_string(HaarKind kind) {
  switch (kind) {
    case HaarKind::kEdgeHorizontal: return "edge-h";
    case HaarKind::kEdgeVertical: return "edge-v";
    case HaarKind::kLineHorizontal: return "line-h";
    case HaarKind::kLineVertical: return "line-v";
    case HaarKind::kDiagonal: return "diagonal";
    case HaarKind::kCenterSurround: return "center-surround";
  }
  return "unknown";
}

std::optional<HaarKind> parse_haar_kind(std::string_view text) {
  for (HaarKind kind : kAllHaarKinds) {
    if (text == to_string(kind) ||
        text == std::to_string(static_cast<int>(kind))) {
      return kind;
    }
  }
  return std::nullopt;
}

std::string to_string(const ChannelKey& key) {
  return std::string(to_string(key.kind)) + "@" + std::to_string(key.scale_index);
}

void validate_region(const FaceRegion& region, const GrayImage& image) {
  if (region.width < 10 || region.height < 10) {
    throw Error(ErrorCode::kInvalidRegion,
                "face region must be at least 10x10, got " + std::to_string(region.width) + "x" +
                    std::to_string(region.height));
  }
  if (region.x < 0 || region.y < 0 || region.x + region.width > image.width() ||
      region.y + region.height > image.height()) {
    throw Error(ErrorCode::kInvalidRegion, "face region exceeds the " +
                                               std::to_string(image.width()) + "x" +
                                               std::to_string(image.height()) + " image");
  }
}

int round_half_up(double value) { return static_cast<int>(std::floor(value + 0.5 + 1e-9)); }

SamplingGrid sample_grid(const FaceRegion& region, double step_frac) {
  if (!(step_frac > 0.0 && step_frac <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must lie in (0, 0.5]");
  }
  const int per_axis = static_cast<int>(std::ceil(1.0 / step_frac - 1e-9)) - 1;
  std::vector<int> xs(static_cast<std::size_t>(per_axis));
  std::vector<int> ys(static_cast<std::size_t>(per_axis));
  for (int k = 1; k <= per_axis; ++k) {
    xs[k - 1] = round_half_up(k * step_frac * region.width);
    ys[k - 1] = round_half_up(k * step_frac * region.height);
  }
  auto strictly_inside = [](const std::vector<int>& v, int extent) {
    if (v.front() <= 0 || v.back() >= extent) return false;
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!strictly_inside(xs, region.width) || !strictly_inside(ys, region.height)) {
    throw Error(ErrorCode::kRegionTooSmall,
                "face region " + std::to_string(region.width) + "x" +
                    std::to_string(region.height) + " cannot host a " +
                    std::to_string(per_axis) + "x" + std::to_string(per_axis) + " grid");
  }
  SamplingGrid grid;
  grid.per_axis = per_axis;
  grid.points.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  for (int y : ys) {
    for (int x : xs) grid.points.push_back({x, y});
  }
  return grid;
}

WindowSpec window_at(GridPoint center, double scale_frac, const FaceRegion& region) {
  if (!(scale_frac > 0.0 && scale_frac <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "window scale must lie in (0, 1]");
  }
  if (center.x < 0 || center.y < 0 || center.x >= region.width || center.y >= region.height) {
    throw Error(ErrorCode::kInvalidArgument, "window center lies outside the face region");
  }
  const int side = std::max(1, round_half_up(scale_frac * std::min(region.width, region.height)));
  const Rect nominal{region.x + center.x - side / 2, region.y + center.y - side / 2, side, side};
  return {center, side, intersect(nominal, region.rect())};
}

double haar_value(const IntegralImage& ii, const WindowSpec& window, HaarKind kind) {
  const Rect& e = window.effective;
  const int min_side = is_three_way(kind) ? 3 : 2;
  if (e.width < min_side || e.height < min_side) {
    throw Error(ErrorCode::kDegenerateWindow,
                "window " + std::to_string(e.width) + "x" + std::to_string(e.height) +
                    " too small for " + std::string(to_string(kind)));
  }
  switch (kind) {
    case HaarKind::kEdgeHorizontal: {
      const int mid = split_half(e.height);
      return mean_of(ii, {e.x, e.y, e.width, mid}) -
             mean_of(ii, {e.x, e.y + mid, e.width, e.height - mid});
    }
    case HaarKind::kEdgeVertical: {
      const int mid = split_half(e.width);
      return mean_of(ii, {e.x, e.y, mid, e.height}) -
             mean_of(ii, {e.x + mid, e.y, e.width - mid, e.height});
    }
    case HaarKind::kLineHorizontal: {
      const int a = split_third(e.height);
      const int b = split_two_thirds(e.height);
      return mean_of_pair(ii, {e.x, e.y, e.width, a}, {e.x, e.y + b, e.width, e.height - b}) -
             mean_of(ii, {e.x, e.y + a, e.width, b - a});
    }
    case HaarKind::kLineVertical: {
      const int a = split_third(e.width);
      const int b = split_two_thirds(e.width);
      return mean_of_pair(ii, {e.x, e.y, a, e.height}, {e.x + b, e.y, e.width - b, e.height}) -
             mean_of(ii, {e.x + a, e.y, b - a, e.height});
    }
    case HaarKind::kDiagonal: {
      const int mx = split_half(e.width);
      const int my = split_half(e.height);
      const Rect top_left{e.x, e.y, mx, my};
      const Rect bottom_right{e.x + mx, e.y + my, e.width - mx, e.height - my};
      const Rect top_right{e.x + mx, e.y, e.width - mx, my};
      const Rect bottom_left{e.x, e.y + my, mx, e.height - my};
      return mean_of_pair(ii, top_left, bottom_right) - mean_of_pair(ii, top_right, bottom_left);
    }
    case HaarKind::kCenterSurround: {
      const int ax = split_third(e.width);
      const int bx = split_two_thirds(e.width);
      const int ay = split_third(e.height);
      const int by = split_two_thirds(e.height);
      const Rect inner{e.x + ax, e.y + ay, bx - ax, by - ay};
      const double inner_sum = ii.sum(inner);
      const double surround_mean =
          (ii.sum(e) - inner_sum) / static_cast<double>(e.area() - inner.area());
      return surround_mean - inner_sum / static_cast<double>(inner.area());
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown Haar kind");
}

void ExtractionConfig::validate() const {
  if (kinds.empty()) throw Error(ErrorCode::kInvalidArgument, "no Haar kinds configured");
  std::vector<HaarKind> sorted = kinds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate Haar kind in configuration");
  }
  if (scales.empty()) throw Error(ErrorCode::kInvalidArgument, "no window scales configured");
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "window scale must lie in (0, 1]");
    }
  }
  if (!(step > 0.0 && step <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must lie in (0, 0.5]");
  }
}

ExtractionResult extract_sequence(std::span<const GrayImage> frames,
                                  std::span<const FaceRegion> regions,
                                  const ExtractionConfig& config) {
  const PreparedSequence prepared = prepare(frames, regions, config);
  ExtractionResult result;
  result.channels = allocate(prepared, static_cast<int>(frames.size()));
  const int frame_count = static_cast<int>(frames.size());
  long degenerate = 0;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) reduction(+ : degenerate)
  for (int t = 0; t < frame_count; ++t) {
    try {
      degenerate += extract_frame(frames[t], region_for(regions, t), prepared.grids[t], config, t,
                                  result.channels);
    } catch (...) {
#pragma omp critical(hankel_extract_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  result.degenerate_windows = degenerate;
  return result;
}

namespace serial {

ExtractionResult extract_sequence(std::span<const GrayImage> frames,
                                  std::span<const FaceRegion> regions,
                                  const ExtractionConfig& config) {
  const PreparedSequence prepared = prepare(frames, regions, config);
  ExtractionResult result;
  result.channels = allocate(prepared, static_cast<int>(frames.size()));
  for (std::size_t t = 0; t < frames.size(); ++t) {
    result.degenerate_windows += extract_frame(frames[t], region_for(regions, t),
                                               prepared.grids[t], config, static_cast<int>(t),
                                               result.channels);
  }
  return result;
}

}  // namespace serial
}  // namespace hankel
