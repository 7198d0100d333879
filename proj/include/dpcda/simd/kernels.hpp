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

// Data-parallel inner loops used by preprocessing and synthesis.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 variant. The variant is picked once per process from
// CPUID; setting DPCDA_SIMD=scalar or DPCDA_SIMD=avx2 in the environment
// overrides the choice.
//
// Element-wise kernels are bit-identical across variants (no FMA contraction,
// IEEE division). Only squared_norm reassociates its sum, so its results may
// differ in the last few ulps between variants.

#ifndef DPCDA_SIMD_KERNELS_HPP_
#define DPCDA_SIMD_KERNELS_HPP_

#include <span>
#include <string_view>

namespace dpcda::simd {

struct KernelTable {
  std::string_view name;

  // dst[i] += src[i]
  void (*add_inplace)(std::span<double> dst, std::span<const double> src);

  // acc[i] += (x[i] - mean[i])^2
  void (*add_squared_deviation)(std::span<double> acc,
                                std::span<const double> x,
                                std::span<const double> mean);

  // sum_i x[i]^2
  double (*squared_norm)(std::span<const double> x);

  // x[i] /= divisor
  void (*divide_inplace)(std::span<double> x, double divisor);

  // out[i] = keep[i] != 0 ? (x[i] - mean[i]) / stddev[i] : +0.0
  void (*standardize)(std::span<double> out, std::span<const double> x,
                      std::span<const double> mean,
                      std::span<const double> stddev,
                      std::span<const double> keep);

  // dst[i] = dst[i] / count + sigma * noise[i]
  void (*mix_finish)(std::span<double> dst, double count,
                     std::span<const double> noise, double sigma);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when AVX2 was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

// The table selected for this process.
const KernelTable& active_kernels() noexcept;

}  // namespace dpcda::simd

#endif  // DPCDA_SIMD_KERNELS_HPP_
