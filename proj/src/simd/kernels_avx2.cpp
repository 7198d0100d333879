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

// Compiled with -mavx2 (and without -mfma). Only reached after a CPUID check.

#include <immintrin.h>

#include <cstddef>
#include <span>

#include "dpcda/simd/kernels.hpp"

namespace dpcda::simd {
namespace {

constexpr std::size_t kLanes = 4;

void add_inplace_avx2(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(dst.data() + i);
    const __m256d b = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(dst.data() + i, _mm256_add_pd(a, b));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

void add_squared_deviation_avx2(std::span<double> acc,
                                std::span<const double> x,
                                std::span<const double> mean) {
  const std::size_t n = acc.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i),
                                    _mm256_loadu_pd(mean.data() + i));
    const __m256d a = _mm256_loadu_pd(acc.data() + i);
    _mm256_storeu_pd(acc.data() + i, _mm256_add_pd(a, _mm256_mul_pd(d, d)));
  }
  for (; i < n; ++i) {
    const double d = x[i] - mean[i];
    acc[i] += d * d;
  }
}

double squared_norm_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  __m256d sum0 = _mm256_setzero_pd();
  __m256d sum1 = _mm256_setzero_pd();
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    const __m256d a = _mm256_loadu_pd(x.data() + i);
    const __m256d b = _mm256_loadu_pd(x.data() + i + kLanes);
    sum0 = _mm256_add_pd(sum0, _mm256_mul_pd(a, a));
    sum1 = _mm256_add_pd(sum1, _mm256_mul_pd(b, b));
  }
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(x.data() + i);
    sum0 = _mm256_add_pd(sum0, _mm256_mul_pd(a, a));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, _mm256_add_pd(sum0, sum1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) sum += x[i] * x[i];
  return sum;
}

void divide_inplace_avx2(std::span<double> x, double divisor) {
  const std::size_t n = x.size();
  const __m256d d = _mm256_set1_pd(divisor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(x.data() + i,
                     _mm256_div_pd(_mm256_loadu_pd(x.data() + i), d));
  }
  for (; i < n; ++i) x[i] /= divisor;
}

void standardize_avx2(std::span<double> out, std::span<const double> x,
                      std::span<const double> mean,
                      std::span<const double> stddev,
                      std::span<const double> keep) {
  const std::size_t n = out.size();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d centered = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i),
                                           _mm256_loadu_pd(mean.data() + i));
    const __m256d q =
        _mm256_div_pd(centered, _mm256_loadu_pd(stddev.data() + i));
    const __m256d mask =
        _mm256_cmp_pd(_mm256_loadu_pd(keep.data() + i), zero, _CMP_NEQ_UQ);
    _mm256_storeu_pd(out.data() + i, _mm256_and_pd(q, mask));
  }
  for (; i < n; ++i) {
    out[i] = keep[i] != 0.0 ? (x[i] - mean[i]) / stddev[i] : 0.0;
  }
}

void mix_finish_avx2(std::span<double> dst, double count,
                     std::span<const double> noise, double sigma) {
  const std::size_t n = dst.size();
  const __m256d c = _mm256_set1_pd(count);
  const __m256d s = _mm256_set1_pd(sigma);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d mean = _mm256_div_pd(_mm256_loadu_pd(dst.data() + i), c);
    const __m256d scaled = _mm256_mul_pd(s, _mm256_loadu_pd(noise.data() + i));
    _mm256_storeu_pd(dst.data() + i, _mm256_add_pd(mean, scaled));
  }
  for (; i < n; ++i) {
    const double scaled = sigma * noise[i];
    dst[i] = dst[i] / count + scaled;
  }
}

constexpr KernelTable kAvx2{
    "avx2",
    &add_inplace_avx2,
    &add_squared_deviation_avx2,
    &squared_norm_avx2,
    &divide_inplace_avx2,
    &standardize_avx2,
    &mix_finish_avx2,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace dpcda::simd
