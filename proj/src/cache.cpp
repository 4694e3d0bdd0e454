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

#include "hankel/cache.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "hankel/error.hpp"

namespace hankel {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

constexpr std::string_view kFeatureMagic = "HKFEAT01";
constexpr std::string_view kEnsembleMagic = "HKENSM01";

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw Error(ErrorCode::kFormat, "truncated binary stream");
  return value;
}

std::string get_string(std::istream& in) {
  const auto size = get<std::uint32_t>(in);
  if (size > (1u << 24)) throw Error(ErrorCode::kFormat, "implausible string length");
  std::string s(size, '\0');
  in.read(s.data(), size);
  if (!in) throw Error(ErrorCode::kFormat, "truncated binary stream");
  return s;
}

void expect_magic(std::istream& in, std::string_view magic) {
  std::string seen(magic.size(), '\0');
  in.read(seen.data(), static_cast<std::streamsize>(seen.size()));
  if (!in || seen != magic) {
    throw Error(ErrorCode::kFormat, "not a " + std::string(magic) + " stream");
  }
}

void expect_version(std::istream& in, std::uint32_t version) {
  const auto seen = get<std::uint32_t>(in);
  if (seen != version) {
    throw Error(ErrorCode::kFormat, "unsupported format version " + std::to_string(seen));
  }
}

HaarKind get_kind(std::istream& in) {
  const auto id = get<std::uint32_t>(in);
  if (id >= kAllHaarKinds.size()) throw Error(ErrorCode::kFormat, "unknown Haar kind id");
  return static_cast<HaarKind>(id);
}

void put_doubles(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void get_doubles(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw Error(ErrorCode::kFormat, "truncated binary stream");
}

}  // namespace

void write_feature_cache(std::ostream& out, const FeatureDataset& dataset, const std::string& key) {
  out.write(kFeatureMagic.data(), static_cast<std::streamsize>(kFeatureMagic.size()));
  put<std::uint32_t>(out, kFeatureCacheVersion);
  put_string(out, key);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.labels.size()));
  for (const std::string& name : dataset.labels.names()) put_string(out, name);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.sequences.size()));
  for (const SequenceFeatures& s : dataset.sequences) {
    put_string(out, s.id);
    put_string(out, s.subject);
    put<std::int32_t>(out, s.label);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.channels.size()));
    for (const FeatureChannelSeries& c : s.channels) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(c.key.kind));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(c.key.scale_index));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(c.series.length()));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(c.series.dim()));
      // Column-major storage of a dim x T matrix is frame-major already.
      put_doubles(out, c.series.samples.data(), static_cast<std::size_t>(c.series.samples.size()));
    }
  }
  if (!out) throw Error(ErrorCode::kFormat, "failed writing feature cache");
}

FeatureCache read_feature_cache(std::istream& in) {
  expect_magic(in, kFeatureMagic);
  expect_version(in, kFeatureCacheVersion);
  FeatureCache cache;
  cache.key = get_string(in);
  const auto label_count = get<std::uint32_t>(in);
  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < label_count; ++i) names.push_back(get_string(in));
  cache.dataset.labels = LabelVocabulary(std::move(names));
  const auto sequences = get<std::uint32_t>(in);
  for (std::uint32_t s = 0; s < sequences; ++s) {
    SequenceFeatures seq;
    seq.id = get_string(in);
    seq.subject = get_string(in);
    seq.label = get<std::int32_t>(in);
    if (seq.label < 0 || seq.label >= cache.dataset.labels.size()) {
      throw Error(ErrorCode::kFormat, "cached label outside vocabulary");
    }
    const auto channels = get<std::uint32_t>(in);
    for (std::uint32_t c = 0; c < channels; ++c) {
      FeatureChannelSeries series;
      series.key.kind = get_kind(in);
      series.key.scale_index = static_cast<int>(get<std::uint32_t>(in));
      const auto length = get<std::uint32_t>(in);
      const auto dim = get<std::uint32_t>(in);
      if (length == 0 || dim == 0 || static_cast<std::uint64_t>(length) * dim > (1ull << 28)) {
        throw Error(ErrorCode::kFormat, "implausible channel shape in feature cache");
      }
      series.series.samples.resize(dim, length);
      get_doubles(in, series.series.samples.data(), static_cast<std::size_t>(length) * dim);
      seq.channels.push_back(std::move(series));
    }
    cache.dataset.sequences.push_back(std::move(seq));
  }
  return cache;
}

std::optional<std::string> peek_feature_cache_key(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    expect_magic(in, kFeatureMagic);
    expect_version(in, kFeatureCacheVersion);
    return get_string(in);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void save_feature_cache(const std::filesystem::path& path, const FeatureDataset& dataset,
                        const std::string& key) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path partial = path.string() + ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIngestion, "cannot write cache '" + partial.string() + "'");
    write_feature_cache(out, dataset, key);
  }
  std::filesystem::rename(partial, path);
}

FeatureCache load_feature_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIngestion, "cannot open cache '" + path.string() + "'");
  return read_feature_cache(in);
}

void write_ensemble(std::ostream& out, const EnsembleRepresentation& ensemble) {
  out.write(kEnsembleMagic.data(), static_cast<std::streamsize>(kEnsembleMagic.size()));
  put<std::uint32_t>(out, kEnsembleFormatVersion);
  put_string(out, ensemble.info().id);
  put_string(out, ensemble.info().subject);
  put<std::uint8_t>(out, ensemble.info().label ? 1 : 0);
  if (ensemble.info().label) put_string(out, *ensemble.info().label);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.order().value()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.channels().size()));
  for (const EnsembleChannel& c : ensemble.channels()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.key.kind));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.key.scale_index));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.order().value()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.order().block_rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.matrix ? c.matrix->block_dim() : 0));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.matrix ? c.matrix->cols() : 0));
    put<std::uint8_t>(out, c.matrix ? 1 : 0);
    if (c.matrix) {
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major =
          c.matrix->values();
      put_doubles(out, row_major.data(), static_cast<std::size_t>(row_major.size()));
    }
  }
  if (!out) throw Error(ErrorCode::kFormat, "failed writing ensemble");
}

EnsembleRepresentation read_ensemble(std::istream& in) {
  expect_magic(in, kEnsembleMagic);
  expect_version(in, kEnsembleFormatVersion);
  SequenceInfo info;
  info.id = get_string(in);
  info.subject = get_string(in);
  if (get<std::uint8_t>(in) != 0) info.label = get_string(in);
  const SystemOrder order(static_cast<int>(get<std::uint32_t>(in)));
  const auto count = get<std::uint32_t>(in);
  std::vector<EnsembleChannel> channels;
  for (std::uint32_t i = 0; i < count; ++i) {
    EnsembleChannel channel;
    channel.key.kind = get_kind(in);
    channel.key.scale_index = static_cast<int>(get<std::uint32_t>(in));
    const auto n = get<std::uint32_t>(in);
    const auto r = get<std::uint32_t>(in);
    const auto v = get<std::uint32_t>(in);
    const auto c = get<std::uint32_t>(in);
    const bool informative = get<std::uint8_t>(in) != 0;
    if (static_cast<int>(n) != order.value() || static_cast<int>(r) != order.block_rows()) {
      throw Error(ErrorCode::kFormat, "ensemble channel order disagrees with the header");
    }
    if (informative) {
      if (v == 0 || c == 0 || static_cast<std::uint64_t>(r) * v * c > (1ull << 28)) {
        throw Error(ErrorCode::kFormat, "implausible Hankel shape");
      }
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values(
          static_cast<Eigen::Index>(r) * v, c);
      get_doubles(in, values.data(), static_cast<std::size_t>(values.size()));
      channel.matrix = HankelMatrix(static_cast<int>(r), static_cast<int>(v), values, true);
    }
    channels.push_back(std::move(channel));
  }
  return EnsembleRepresentation(order, std::move(channels), std::move(info));
}

}  // namespace hankel
