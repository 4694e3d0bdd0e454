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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hankel/appearance.hpp"
#include "hankel/time_series.hpp"

namespace hankel {

/// Maximal block-row index n of the Hankel layout; the matrix has n + 1
/// block rows.
class SystemOrder {
 public:
  explicit SystemOrder(int n = 2);

  int value() const { return n_; }
  int block_rows() const { return n_ + 1; }
  friend bool operator==(const SystemOrder&, const SystemOrder&) = default;

 private:
  int n_;
};

inline constexpr double kUnitGramTolerance = 1e-9;

/// Block-Hankel lift of a time series: block (a, b) is sample y_{a+b}.
/// Size (block_rows * block_dim) x cols, with block_rows + cols - 1 = T.
class HankelMatrix {
 public:
  HankelMatrix(int block_rows, int block_dim, Eigen::MatrixXd values, bool normalized);

  int block_rows() const { return block_rows_; }
  int block_dim() const { return block_dim_; }
  int rows() const { return static_cast<int>(values_.rows()); }
  int cols() const { return static_cast<int>(values_.cols()); }
  bool normalized() const { return normalized_; }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  int block_rows_;
  int block_dim_;
  Eigen::MatrixXd values_;
  bool normalized_;
};

/// Subtracts the per-coordinate temporal mean.
TimeSeries zero_mean(const TimeSeries& series);

/// Throws kSequenceTooShort when T <= n.
HankelMatrix build_hankel(const TimeSeries& series, SystemOrder order);

/// ||H H^T||_F, evaluated on the smaller of the two Gram matrices.
double gram_frobenius_norm(const Eigen::MatrixXd& h);

/// H / sqrt(||H H^T||_F). Throws kZeroDynamics for an all-zero matrix.
HankelMatrix normalize(const HankelMatrix& h);

/// ||Hp^T Hq||_F for normalized matrices with equal row counts; lies in
/// [0, 1]. Throws kIncompatibleChannels on a row-count mismatch.
double similarity(const HankelMatrix& p, const HankelMatrix& q);

struct SequenceInfo {
  std::string id;
  std::string subject;
  std::optional<std::string> label;
};

/// A channel whose series has no temporal variation carries no matrix and
/// abstains from voting.
struct EnsembleChannel {
  ChannelKey key;
  std::optional<HankelMatrix> matrix;

  bool informative() const { return matrix.has_value(); }
};

class EnsembleRepresentation {
 public:
  EnsembleRepresentation(SystemOrder order, std::vector<EnsembleChannel> channels,
                         SequenceInfo info);

  SystemOrder order() const { return order_; }
  const SequenceInfo& info() const { return info_; }
  const std::vector<EnsembleChannel>& channels() const { return channels_; }
  const EnsembleChannel* find(const ChannelKey& key) const;

 private:
  SystemOrder order_;
  std::vector<EnsembleChannel> channels_;  // sorted by key, unique
  SequenceInfo info_;
};

/// True when the series has no variation beyond rounding noise relative to
/// its magnitude.
bool is_constant_in_time(const TimeSeries& series);

/// Zero-means, lifts and normalizes every channel.
EnsembleRepresentation build_ensemble(std::span<const FeatureChannelSeries> channels,
                                      SystemOrder order, SequenceInfo info = {});

}  // namespace hankel
