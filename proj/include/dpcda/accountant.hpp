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

// Renyi-DP accounting for class-centric mixing.
//
// One synthetic sample is a Gaussian mechanism on the mean of l clipped rows
// and l one-hot rows, with sensitivities 2c/l and sqrt(2)/l. Its RDP curve is
// linear in the order:
//
//   eps(a) = a * slope,   slope = (2 c^2 / sigma_x^2 + 1 / sigma_y^2) / l^2.
//
// Subsampling with ratio p amplifies each release to
//
//   eps'(a) = log(1 + p^2 C(a,2) min{4(e^{eps(2)} - 1), 2 e^{eps(2)}}
//                   + 4 G(a)) / (a - 1),
//   G(a)    = sum_{j=3..a} p^j C(a,j) sqrt(B(2 floor(j/2)) B(2 ceil(j/2))),
//   B(j)    = sum_{i=0..j} (-1)^(j-i) C(j,i) e^{(i-1) eps(i)},
//
// and T releases compose and convert to
//
//   epsilon = min_{a = 3..alpha_max} T eps'(a) + log(1/delta) / (a - 1).
//
// B(j) is the j-th central moment of the privacy-loss likelihood ratio. The
// alternating sum cancels catastrophically for small slopes; it is evaluated
// in log space in double precision and re-evaluated with MPFR whenever the
// estimated number of surviving significant bits is too small.
//
// All epsilons are in nats.

#ifndef DPCDA_ACCOUNTANT_HPP_
#define DPCDA_ACCOUNTANT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dpcda::accountant {

enum class SamplingMode {
  kGlobal,    // p = l / N
  kPerClass,  // p = l / min_k N_k
};

inline constexpr double kDefaultDelta = 1e-5;
inline constexpr std::uint32_t kDefaultAlphaMax = 256;
inline constexpr std::uint32_t kMaxAlpha = 4096;

struct AccountingParams {
  std::uint32_t l = 1;
  double c = 1.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  std::uint64_t n = 1;
  std::uint64_t t = 1;
  double delta = kDefaultDelta;
  std::uint32_t alpha_max = kDefaultAlphaMax;
  SamplingMode sampling = SamplingMode::kGlobal;
  std::uint64_t min_class_size = 0;  // required for kPerClass
  // Double-precision moments with fewer estimated significant bits than this
  // are recomputed in extended precision.
  double min_significant_bits = 40.0;

  double sampling_ratio() const;
  // Throws kValue for out-of-range parameters. Zero sigmas are allowed and
  // yield an infinite epsilon.
  void validate() const;
};

struct RdpPoint {
  std::uint32_t alpha;
  double epsilon;
};
using RdpCurve = std::vector<RdpPoint>;

struct PrivacyReport {
  double epsilon = 0.0;
  double delta = kDefaultDelta;
  std::uint32_t alpha_star = 0;
  RdpCurve per_release_rdp;
  AccountingParams params;
  std::optional<double> baseline_epsilon;
  std::string precision_note;
  bool boundary_minimum = false;  // alpha_star == alpha_max; raise alpha_max
  bool non_private = false;       // some sigma is zero
};

// Slope of the per-release RDP curve, eps(a) = a * slope. +inf for zero sigma.
double rdp_slope(const AccountingParams& params);

// Dimension-dependent slope used by the looser baseline:
// (d_x / sigma_x^2 + d_y / sigma_y^2) / (2 l^2).
double baseline_rdp_slope(const AccountingParams& params, std::uint64_t d_x,
                          std::uint64_t d_y);

double base_rdp_epsilon(std::uint32_t alpha, const AccountingParams& params);

// B(j); may overflow to +inf for large slopes, see log_moment_term_B.
double moment_term_B(std::uint32_t j, const AccountingParams& params);
double log_moment_term_B(std::uint32_t j, const AccountingParams& params);

double higher_order_G(std::uint32_t alpha, const AccountingParams& params);
double log_higher_order_G(std::uint32_t alpha, const AccountingParams& params);

double subsampled_rdp_epsilon(std::uint32_t alpha, const AccountingParams& params);

PrivacyReport compose_and_convert(const AccountingParams& params);

// T-fold composition of `curve` and conversion at its best order >= 3.
PrivacyReport convert_rdp_curve(const RdpCurve& curve, std::uint64_t t, double delta);

// Same pipeline with the dimension-dependent base curve. The returned
// report's baseline_epsilon is empty; compare_with_baseline fills both.
PrivacyReport baseline_lee_epsilon(const AccountingParams& params, std::uint64_t d_x,
                                   std::uint64_t d_y);

struct CalibrationRequest {
  double target_epsilon = 10.0;
  double ratio = 1.0;  // sigma_y / sigma_x
  double sigma_lo = 1e-4;
  double sigma_hi = 1e4;
  int max_iterations = 200;
  AccountingParams params;  // sigma fields are ignored
};

struct CalibrationResult {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  PrivacyReport report;
  int iterations = 0;
  bool bracket_hit = false;  // target above epsilon at sigma_lo
};

// Smallest sigma_x (with sigma_y = ratio * sigma_x) whose epsilon does not
// exceed the target, by bisection in log(sigma).
CalibrationResult calibrate_noise(const CalibrationRequest& request);

double calibration_tolerance(double target_epsilon);

struct SweepGrid {
  std::vector<std::uint32_t> l_values;
  std::vector<double> sigma_values;  // sigma_x; sigma_y = ratio * sigma_x
  double ratio = 1.0;
};

struct SweepRow {
  std::uint32_t l = 0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  std::uint32_t alpha_star = 0;
  double epsilon = 0.0;
  std::string status;  // "ok", "boundary", or "error: ..."
};

// One row per (l, sigma) cell, l-major. Cell failures are recorded in the
// row's status. `threads` = 0 uses hardware concurrency.
std::vector<SweepRow> sweep(const SweepGrid& grid, const AccountingParams& base,
                            unsigned threads = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);

nlohmann::json to_json(const AccountingParams& params);
AccountingParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PrivacyReport& report, bool include_curve = true);

}  // namespace dpcda::accountant

#endif  // DPCDA_ACCOUNTANT_HPP_
