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

#include "hankel/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "hankel/error.hpp"

namespace hankel {

GrayImage load_gray_image(const std::filesystem::path& path) {
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::kIngestion, "cannot decode frame '" + path.string() + "': " + e.what());
  }
  if (mat.empty()) {
    throw Error(ErrorCode::kIngestion, "cannot read frame '" + path.string() + "'");
  }
  if (mat.depth() != CV_8U) {
    throw Error(ErrorCode::kIngestion, "frame '" + path.string() + "' is not an 8-bit image");
  }
  const int channels = mat.channels();
  if (channels != 1 && channels != 3 && channels != 4) {
    throw Error(ErrorCode::kIngestion,
                "frame '" + path.string() + "' has an unsupported channel count");
  }
  std::vector<double> pixels(static_cast<std::size_t>(mat.rows) * static_cast<std::size_t>(mat.cols));
  for (int y = 0; y < mat.rows; ++y) {
    const unsigned char* row = mat.ptr<unsigned char>(y);
    for (int x = 0; x < mat.cols; ++x) {
      const unsigned char* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      // OpenCV stores colour as BGR(A).
      const double value =
          channels == 1 ? px[0] : 0.299 * px[2] + 0.587 * px[1] + 0.114 * px[0];
      pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(mat.cols) + x] = value;
    }
  }
  return GrayImage(mat.cols, mat.rows, std::move(pixels));
}

void save_gray_image(const std::filesystem::path& path, const GrayImage& image) {
  cv::Mat mat(image.height(), image.width(), CV_8UC1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      mat.at<unsigned char>(y, x) =
          static_cast<unsigned char>(std::clamp(std::lround(image.at(x, y)), 0L, 255L));
    }
  }
  if (!cv::imwrite(path.string(), mat)) {
    throw Error(ErrorCode::kIngestion, "cannot write image '" + path.string() + "'");
  }
}

}  // namespace hankel
