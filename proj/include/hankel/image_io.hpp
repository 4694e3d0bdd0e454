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

#include "hankel/image.hpp"

namespace hankel {

/// Reads an 8-bit raster (PNG, PGM, BMP, ...). Colour images are reduced
/// with luma = 0.299 R + 0.587 G + 0.114 B; alpha is ignored. Throws
/// kIngestion naming the file on failure.
GrayImage load_gray_image(const std::filesystem::path& path);

/// Writes an 8-bit grayscale image; values are rounded and clamped to
/// [0, 255].
void save_gray_image(const std::filesystem::path& path, const GrayImage& image);

}  // namespace hankel
