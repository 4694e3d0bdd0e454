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

#include "hankel/image.hpp"

#include <algorithm>
#include <string>

#include "hankel/error.hpp"

namespace hankel {

Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

GrayImage::GrayImage(int width, int height)
    : GrayImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(height, 0)))) {}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kInvalidArgument, "pixel count does not match image size");
  }
}

IntegralImage::IntegralImage(const GrayImage& image)
    : width_(image.width()),
      height_(image.height()),
      stride_(static_cast<std::size_t>(image.width()) + 1),
      table_(stride_ * (static_cast<std::size_t>(image.height()) + 1), 0.0) {
  for (int y = 0; y < height_; ++y) {
    double row_sum = 0.0;
    const std::size_t above = static_cast<std::size_t>(y) * stride_;
    const std::size_t here = above + stride_;
    for (int x = 0; x < width_; ++x) {
      row_sum += image.at(x, y);
      table_[here + x + 1] = table_[above + x + 1] + row_sum;
    }
  }
}

double IntegralImage::sum(const Rect& r) const {
  return at(r.right(), r.bottom()) - at(r.x, r.bottom()) - at(r.right(), r.y) + at(r.x, r.y);
}

IntegralImage integral_image(const GrayImage& image) { return IntegralImage(image); }

double rect_mean(const IntegralImage& ii, const Rect& rect) {
  if (rect.empty()) {
    throw Error(ErrorCode::kDegenerateRect, "rectangle has no pixels");
  }
  if (rect.x < 0 || rect.y < 0 || rect.right() > ii.width() || rect.bottom() > ii.height()) {
    throw Error(ErrorCode::kInvalidArgument, "rectangle leaves the image");
  }
  return ii.sum(rect) / static_cast<double>(rect.area());
}

}  // namespace hankel
