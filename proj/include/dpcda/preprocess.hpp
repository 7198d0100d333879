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

// Feature-wise z-scoring, l2 clipping and one-hot encoding.
//
// NOTE: the z-score statistics are computed on the full private dataset and
// are NOT covered by the reported privacy budget. They are used internally
// and never written to any output; do not publish them.

#ifndef DPCDA_PREPROCESS_HPP_
#define DPCDA_PREPROCESS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/matrix.hpp"

namespace dpcda {

inline constexpr double kDegenerateStddev = 1e-12;

// Population (divide-by-N) statistics per column.
struct FeatureStats {
  std::vector<double> means;
  std::vector<double> stddevs;
  std::vector<bool> degenerate;  // stddev < kDegenerateStddev

  std::size_t dim() const noexcept { return means.size(); }
};

struct ClipParam {
  double c = 1.0;
};

struct OneHotLabels {
  Matrix y;  // N x K
};

FeatureStats zscore_fit(const Matrix& features);

// Degenerate columns map to exactly 0.
Matrix zscore_apply(const Matrix& features, const FeatureStats& stats);

// Rows whose norm exceeds c are divided by ||x||/c. Norms within a relative
// 1e-12 of c are left alone, which makes the operation idempotent.
Matrix clip_l2(const Matrix& features, ClipParam clip);

OneHotLabels one_hot(std::span<const std::uint32_t> labels, std::uint32_t class_count);

// Fit on `ds`, standardize, clip. Labels and metadata are carried over.
Dataset preprocess(const Dataset& ds, ClipParam clip);

}  // namespace dpcda

#endif  // DPCDA_PREPROCESS_HPP_
