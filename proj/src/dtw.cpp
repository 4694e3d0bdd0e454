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

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "hankel/classify.hpp"
#include "hankel/error.hpp"

namespace hankel {

double dtw_distance(const TimeSeries& a, const TimeSeries& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kIncompatibleChannels,
                "DTW needs equal sample dimensions, got " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
  if (a.length() < 1 || b.length() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "DTW needs non-empty series");
  }
  const int rows = a.length();
  const int cols = b.length();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Rolling rows of the (rows + 1) x (cols + 1) accumulated-cost table.
  std::vector<double> previous(static_cast<std::size_t>(cols) + 1, kInf);
  std::vector<double> current(static_cast<std::size_t>(cols) + 1, kInf);
  previous[0] = 0.0;
  for (int i = 1; i <= rows; ++i) {
    current[0] = kInf;
    const auto ai = a.samples.col(i - 1);
    for (int j = 1; j <= cols; ++j) {
      const double local = (ai - b.samples.col(j - 1)).norm();
      const double step = std::min({previous[j - 1], previous[j], current[j - 1]});
      current[j] = local + step;
    }
    std::swap(previous, current);
  }
  return previous[static_cast<std::size_t>(cols)];
}

}  // namespace hankel
