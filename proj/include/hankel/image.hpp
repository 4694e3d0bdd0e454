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

#include <cstddef>
#include <span>
#include <vector>

namespace hankel {

/// Axis-aligned pixel rectangle: columns [x, x + width), rows [y, y + height).
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool empty() const { return width <= 0 || height <= 0; }
  long area() const { return empty() ? 0L : static_cast<long>(width) * height; }
  int right() const { return x + width; }
  int bottom() const { return y + height; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect intersect(const Rect& a, const Rect& b);

/// Row-major single channel image with real-valued intensities.
class GrayImage {
 public:
  GrayImage(int width, int height);
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  Rect bounds() const { return {0, 0, width_, height_}; }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  double& at(int x, int y) { return pixels_[index(x, y)]; }
  std::span<const double> pixels() const { return pixels_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<double> pixels_;
};

/// Summed-area table of size (width + 1) x (height + 1). Entry (x, y) holds
/// the sum of all pixels with column < x and row < y.
class IntegralImage {
 public:
  explicit IntegralImage(const GrayImage& image);

  int width() const { return width_; }
  int height() const { return height_; }

  double at(int x, int y) const {
    return table_[static_cast<std::size_t>(y) * stride_ +
                  static_cast<std::size_t>(x)];
  }

  /// Four-lookup rectangle sum. The rectangle must lie inside the image.
  double sum(const Rect& rect) const;

 private:
  int width_;
  int height_;
  std::size_t stride_;
  std::vector<double> table_;
};

IntegralImage integral_image(const GrayImage& image);

/// Mean intensity over `rect`; throws kDegenerateRect on an empty rectangle
/// and kInvalidArgument if it leaves the image.
double rect_mean(const IntegralImage& ii, const Rect& rect);

}  // namespace hankel
