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

#include "hankel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hankel/error.hpp"

namespace hankel {

SystemOrder::SystemOrder(int n) : n_(n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "system order must be at least 1, got " + std::to_string(n));
  }
}

HankelMatrix::HankelMatrix(int block_rows, int block_dim, Eigen::MatrixXd values,
                           bool normalized)
    : block_rows_(block_rows),
      block_dim_(block_dim),
      values_(std::move(values)),
      normalized_(normalized) {
  if (block_rows < 1 || block_dim < 1 ||
      values_.rows() != static_cast<Eigen::Index>(block_rows) * block_dim ||
      values_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent Hankel matrix shape");
  }
}

TimeSeries zero_mean(const TimeSeries& series) {
  if (series.length() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "time series is empty");
  }
  const Eigen::VectorXd mean = series.samples.rowwise().mean();
  return TimeSeries(series.samples.colwise() - mean);
}

HankelMatrix build_hankel(const TimeSeries& series, SystemOrder order) {
  const int n = order.value();
  const int length = series.length();
  if (length <= n) {
    throw Error(ErrorCode::kSequenceTooShort,
                "sequence of length " + std::to_string(length) + " is too short for order " +
                    std::to_string(n));
  }
  const int v = series.dim();
  const int rows = order.block_rows();
  const int cols = length - n;
  Eigen::MatrixXd h(static_cast<Eigen::Index>(rows) * v, cols);
  for (int a = 0; a < rows; ++a) {
    h.middleRows(static_cast<Eigen::Index>(a) * v, v) = series.samples.middleCols(a, cols);
  }
  return HankelMatrix(rows, v, std::move(h), false);
}

double gram_frobenius_norm(const Eigen::MatrixXd& h) {
  if (h.cols() <= h.rows()) {
    const Eigen::MatrixXd gram = h.transpose() * h;
    return gram.norm();
  }
  const Eigen::MatrixXd gram = h * h.transpose();
  return gram.norm();
}

HankelMatrix normalize(const HankelMatrix& h) {
  const double gram_norm = gram_frobenius_norm(h.values());
  if (!(gram_norm > 0.0) || !std::isfinite(gram_norm)) {
    throw Error(ErrorCode::kZeroDynamics, "Hankel matrix has no energy to normalize");
  }
  return HankelMatrix(h.block_rows(), h.block_dim(), h.values() / std::sqrt(gram_norm), true);
}

double similarity(const HankelMatrix& p, const HankelMatrix& q) {
  if (p.rows() != q.rows() || p.block_dim() != q.block_dim()) {
    throw Error(ErrorCode::kIncompatibleChannels,
                "cannot compare Hankel matrices with " + std::to_string(p.rows()) + " and " +
                    std::to_string(q.rows()) + " rows");
  }
  const Eigen::MatrixXd cross = p.values().transpose() * q.values();
  return cross.norm();
}

EnsembleRepresentation::EnsembleRepresentation(SystemOrder order,
                                               std::vector<EnsembleChannel> channels,
                                               SequenceInfo info)
    : order_(order), channels_(std::move(channels)), info_(std::move(info)) {
  std::sort(channels_.begin(), channels_.end(),
            [](const EnsembleChannel& a, const EnsembleChannel& b) { return a.key < b.key; });
  const auto same_key = [](const EnsembleChannel& a, const EnsembleChannel& b) {
    return a.key == b.key;
  };
  if (std::adjacent_find(channels_.begin(), channels_.end(), same_key) != channels_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate channel in ensemble");
  }
  for (const EnsembleChannel& c : channels_) {
    if (c.matrix && (!c.matrix->normalized() || c.matrix->block_rows() != order.block_rows())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ensemble channel " + to_string(c.key) + " is not a normalized order-" +
                      std::to_string(order.value()) + " matrix");
    }
  }
}

const EnsembleChannel* EnsembleRepresentation::find(const ChannelKey& key) const {
  const auto it = std::lower_bound(
      channels_.begin(), channels_.end(), key,
      [](const EnsembleChannel& c, const ChannelKey& k) { return c.key < k; });
  if (it == channels_.end() || !(it->key == key)) return nullptr;
  return &*it;
}

bool is_constant_in_time(const TimeSeries& series) {
  const double magnitude = series.samples.cwiseAbs().maxCoeff();
  if (magnitude == 0.0) return true;
  const double spread = zero_mean(series).samples.cwiseAbs().maxCoeff();
  return spread <= 1e-12 * magnitude;
}

EnsembleRepresentation build_ensemble(std::span<const FeatureChannelSeries> channels,
                                      SystemOrder order, SequenceInfo info) {
  std::vector<EnsembleChannel> out;
  out.reserve(channels.size());
  for (const FeatureChannelSeries& channel : channels) {
    if (channel.series.length() <= order.value()) {
      throw Error(ErrorCode::kSequenceTooShort,
                  "channel " + to_string(channel.key) + " of sequence '" + info.id +
                      "' has " + std::to_string(channel.series.length()) +
                      " frames, order " + std::to_string(order.value()) + " needs at least " +
                      std::to_string(order.block_rows()));
    }
    EnsembleChannel entry{channel.key, std::nullopt};
    if (!is_constant_in_time(channel.series)) {
      try {
        entry.matrix = normalize(build_hankel(zero_mean(channel.series), order));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kZeroDynamics) throw;
      }
    }
    out.push_back(std::move(entry));
  }
  return EnsembleRepresentation(order, std::move(out), std::move(info));
}

}  // namespace hankel
