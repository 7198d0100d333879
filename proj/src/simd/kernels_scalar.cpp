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

#include <cstddef>
#include <span>

#include "dpcda/simd/kernels.hpp"

namespace dpcda::simd {
namespace {

void add_inplace_scalar(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void add_squared_deviation_scalar(std::span<double> acc,
                                  std::span<const double> x,
                                  std::span<const double> mean) {
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const double d = x[i] - mean[i];
    acc[i] += d * d;
  }
}

double squared_norm_scalar(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum;
}

void divide_inplace_scalar(std::span<double> x, double divisor) {
  for (double& v : x) v /= divisor;
}

void standardize_scalar(std::span<double> out, std::span<const double> x,
                        std::span<const double> mean,
                        std::span<const double> stddev,
                        std::span<const double> keep) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = keep[i] != 0.0 ? (x[i] - mean[i]) / stddev[i] : 0.0;
  }
}

void mix_finish_scalar(std::span<double> dst, double count,
                       std::span<const double> noise, double sigma) {
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double scaled = sigma * noise[i];
    dst[i] = dst[i] / count + scaled;
  }
}

constexpr KernelTable kScalar{
    "scalar",
    &add_inplace_scalar,
    &add_squared_deviation_scalar,
    &squared_norm_scalar,
    &divide_inplace_scalar,
    &standardize_scalar,
    &mix_finish_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace dpcda::simd
