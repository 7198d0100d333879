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

#ifndef DPCDA_SRC_ACCOUNTANT_MOMENTS_HPP_
#define DPCDA_SRC_ACCOUNTANT_MOMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpcda/accountant.hpp"

namespace dpcda::accountant::detail {

struct MomentOptions {
  double min_significant_bits = 40.0;
  // Target for the extended-precision result.
  double target_bits = 64.0;
  long max_precision_bits = 1L << 20;
  // Negative results no larger than this times the largest term are clamped
  // to zero once the precision cap is reached.
  double clamp_tolerance = 1e-9;
};

struct MomentValue {
  double log_value = 0.0;  // log B(j); -inf when B(j) == 0
  bool extended = false;
  long precision_bits = 53;
};

// log B(j) for the Gaussian RDP curve eps(i) = i * slope.
// Throws Error(kPrecision) if the extended evaluation cannot recover enough
// bits within max_precision_bits.
MomentValue log_central_moment(std::uint32_t j, double slope, const MomentOptions& options);

// log C(n, k) for k = 0..n.
std::vector<double> log_binomial_row(std::uint32_t n);

double log_sum_exp(double a, double b);

// log(1 + e^x)
double log1p_exp(double x);

// log(e^x - 1) for x > 0
double log_expm1(double x);

// Amplified per-release curve for one (slope, p) pair. Even moments are
// cached; evaluation is single-threaded per instance.
class SubsampledGaussian {
 public:
  SubsampledGaussian(double slope, double p, MomentOptions options);

  double log_moment(std::uint32_t j);
  double log_g(std::uint32_t alpha);
  double eps_prime(std::uint32_t alpha);

  // (alpha, eps'(alpha)) for alpha = 2..alpha_max. Orders whose moments fail
  // are omitted and counted in failed_orders().
  RdpCurve curve(std::uint32_t alpha_max);

  int extended_moments() const noexcept { return extended_count_; }
  int evaluated_moments() const noexcept { return evaluated_count_; }
  long max_precision_bits() const noexcept { return max_bits_; }
  int failed_orders() const noexcept { return failed_orders_; }
  const std::string& last_failure() const noexcept { return last_failure_; }

 private:
  double slope_;
  double log_p_;
  MomentOptions options_;
  std::vector<std::optional<double>> even_cache_;
  int extended_count_ = 0;
  int evaluated_count_ = 0;
  long max_bits_ = 53;
  int failed_orders_ = 0;
  std::string last_failure_;
};

}  // namespace dpcda::accountant::detail

#endif  // DPCDA_SRC_ACCOUNTANT_MOMENTS_HPP_
