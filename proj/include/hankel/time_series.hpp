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

#include <Eigen/Dense>

namespace hankel {

/// A length-T sequence of v-dimensional samples, stored column-wise:
/// column t is y_t.
struct TimeSeries {
  Eigen::MatrixXd samples;

  TimeSeries() = default;
  explicit TimeSeries(Eigen::MatrixXd s) : samples(std::move(s)) {}

  int dim() const { return static_cast<int>(samples.rows()); }
  int length() const { return static_cast<int>(samples.cols()); }
};

}  // namespace hankel
