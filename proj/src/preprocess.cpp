// Copyright 2026 The dpcda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpcda/preprocess.hpp"

#include <cmath>
#include <string>

#include "dpcda/error.hpp"
#include "dpcda/simd/kernels.hpp"

namespace dpcda {
namespace {

constexpr double kClipSlack = 1e-12;

void require_finite(const Matrix& m, const char* what) {
  for (double v : m.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kValue, std::string(what) + ": non-finite input");
    }
  }
}

}  // namespace

FeatureStats zscore_fit(const Matrix& features) {
  if (features.rows() == 0) {
    throw Error(ErrorKind::kValue, "zscore_fit: empty matrix");
  }
  require_finite(features, "zscore_fit");
  const simd::KernelTable& k = simd::active_kernels();
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  const auto count = static_cast<double>(n);

  FeatureStats stats;
  stats.means.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) k.add_inplace(stats.means, features.row(i));
  for (double& m : stats.means) m /= count;

  std::vector<double> ss(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    k.add_squared_deviation(ss, features.row(i), stats.means);
  }
  stats.stddevs.resize(d);
  stats.degenerate.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    stats.stddevs[j] = std::sqrt(ss[j] / count);
    stats.degenerate[j] = stats.stddevs[j] < kDegenerateStddev;
  }
  return stats;
}

Matrix zscore_apply(const Matrix& features, const FeatureStats& stats) {
  if (features.cols() != stats.dim() || stats.stddevs.size() != stats.dim() ||
      stats.degenerate.size() != stats.dim()) {
    throw Error(ErrorKind::kDimension,
                "zscore_apply: matrix has " + std::to_string(features.cols()) +
                    " columns, stats have " + std::to_string(stats.dim()));
  }
  std::vector<double> keep(stats.dim());
  for (std::size_t j = 0; j < keep.size(); ++j) keep[j] = stats.degenerate[j] ? 0.0 : 1.0;

  const simd::KernelTable& k = simd::active_kernels();
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    k.standardize(out.row(i), features.row(i), stats.means, stats.stddevs, keep);
  }
  return out;
}

Matrix clip_l2(const Matrix& features, ClipParam clip) {
  if (!(clip.c > 0.0) || !std::isfinite(clip.c)) {
    throw Error(ErrorKind::kValue, "clip_l2: c must be positive and finite");
  }
  require_finite(features, "clip_l2");
  const simd::KernelTable& k = simd::active_kernels();
  Matrix out = features;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    std::span<double> row = out.row(i);
    const double norm = std::sqrt(k.squared_norm(row));
    if (norm > clip.c * (1.0 + kClipSlack)) k.divide_inplace(row, norm / clip.c);
  }
  return out;
}

OneHotLabels one_hot(std::span<const std::uint32_t> labels, std::uint32_t class_count) {
  OneHotLabels out{Matrix(labels.size(), class_count)};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > class_count) {
      throw Error(ErrorKind::kValue, "one_hot: label " + std::to_string(labels[i]) +
                                         " outside 1.." + std::to_string(class_count));
    }
    out.y(i, labels[i] - 1) = 1.0;
  }
  return out;
}

Dataset preprocess(const Dataset& ds, ClipParam clip) {
  Dataset out;
  out.features = clip_l2(zscore_apply(ds.features, zscore_fit(ds.features)), clip);
  out.labels = ds.labels;
  out.class_count = ds.class_count;
  out.original_labels = ds.original_labels;
  out.source_name = ds.source_name;
  return out;
}

}  // namespace dpcda
