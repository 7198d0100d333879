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

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "dpcda/simd/kernels.hpp"

namespace simd = dpcda::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("active table is one of the known variants") {
  const auto name = simd::active_kernels().name;
  CHECK((name == "scalar" || name == "avx2"));
  CHECK(simd::scalar_kernels().name == "scalar");
}

TEST_CASE("scalar reference values") {
  const auto& k = simd::scalar_kernels();
  std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {0.5, -1, 4};
  k.add_inplace(a, b);
  CHECK(a == std::vector<double>{1.5, 1, 7});
  CHECK(k.squared_norm(b) == 17.25);
  k.divide_inplace(a, 2.0);
  CHECK(a == std::vector<double>{0.75, 0.5, 3.5});
  std::vector<double> acc(3, 0.0);
  k.add_squared_deviation(acc, b, std::vector<double>{0.5, 0, 2});
  CHECK(acc == std::vector<double>{0, 1, 4});
  std::vector<double> out(3);
  k.standardize(out, b, std::vector<double>{0.5, 0, 2}, std::vector<double>{1, 2, 4},
                std::vector<double>{1, 0, 1});
  CHECK(out == std::vector<double>{0, 0, 0.5});
  std::vector<double> dst = {4, 8, 12};
  k.mix_finish(dst, 4.0, std::vector<double>{1, -1, 0.5}, 2.0);
  CHECK(dst == std::vector<double>{3, 0, 4});
}

TEST_CASE("avx2 matches scalar") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("avx2 unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(11);
  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    auto mean = random_vector(n, rng);
    auto sd = random_vector(n, rng, 3.0);
    for (double& s : sd) s = std::abs(s) + 0.01;
    std::vector<double> keep(n);
    for (std::size_t i = 0; i < n; ++i) keep[i] = (i % 3 == 1) ? 0.0 : 1.0;

    auto a1 = x, a2 = x;
    ref.add_inplace(a1, y);
    avx->add_inplace(a2, y);
    CHECK(bit_equal(a1, a2));

    auto s1 = y, s2 = y;
    ref.add_squared_deviation(s1, x, mean);
    avx->add_squared_deviation(s2, x, mean);
    CHECK(bit_equal(s1, s2));

    const double n1 = ref.squared_norm(x);
    const double n2 = avx->squared_norm(x);
    CHECK(std::abs(n1 - n2) <= 1e-14 * n1);

    auto d1 = x, d2 = x;
    ref.divide_inplace(d1, 3.7);
    avx->divide_inplace(d2, 3.7);
    CHECK(bit_equal(d1, d2));

    std::vector<double> z1(n), z2(n);
    ref.standardize(z1, x, mean, sd, keep);
    avx->standardize(z2, x, mean, sd, keep);
    CHECK(bit_equal(z1, z2));

    auto m1 = x, m2 = x;
    ref.mix_finish(m1, 7.0, y, 0.3);
    avx->mix_finish(m2, 7.0, y, 0.3);
    CHECK(bit_equal(m1, m2));
  }
}

TEST_CASE("avx2 standardize writes positive zero for masked lanes") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr) return;
  const std::vector<double> x(9, -3.0), mean(9, 1.0), sd(9, 0.0), keep(9, 0.0);
  std::vector<double> out(9, 5.0);
  avx->standardize(out, x, mean, sd, keep);
  for (double v : out) {
    CHECK(v == 0.0);
    CHECK_FALSE(std::signbit(v));
  }
}
