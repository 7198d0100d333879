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

#include "moments.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dpcda/error.hpp"

namespace dpcda::accountant::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kExactBinomialLimit = 1020;

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t precision) { mpfr_init2(v_, precision); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;

  mpfr_ptr get() noexcept { return v_; }

 private:
  mpfr_t v_;
};

class MpzValue {
 public:
  MpzValue() { mpz_init_set_ui(v_, 1); }
  ~MpzValue() { mpz_clear(v_); }
  MpzValue(const MpzValue&) = delete;
  MpzValue& operator=(const MpzValue&) = delete;

  mpz_ptr get() noexcept { return v_; }

 private:
  mpz_t v_;
};

struct DoubleEstimate {
  double log_sum = -kInf;       // log of the sum of absolute terms
  double log_value = -kInf;     // log B(j), valid when positive
  bool positive = false;
  double lost_bits = 0.0;
  double significant_bits = 0.0;
};

DoubleEstimate double_moment(std::uint32_t j, double slope) {
  const std::vector<double> lc = log_binomial_row(j);
  std::vector<double> pos_terms;
  std::vector<double> neg_terms;
  double max_abs = 0.0;
  for (std::uint32_t i = 0; i <= j; ++i) {
    const double a = lc[i] + (static_cast<double>(i) - 1.0) * static_cast<double>(i) * slope;
    max_abs = std::max(max_abs, std::abs(a));
    ((j - i) % 2 == 0 ? pos_terms : neg_terms).push_back(a);
  }
  auto lse = [](const std::vector<double>& v) {
    double m = -kInf;
    for (double x : v) m = std::max(m, x);
    if (m == -kInf) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
  };
  const double pos = lse(pos_terms);
  const double neg = lse(neg_terms);

  DoubleEstimate est;
  est.log_sum = log_sum_exp(pos, neg);
  if (neg == -kInf || pos > neg) {
    est.positive = true;
    est.log_value = neg == -kInf ? pos : pos + std::log1p(-std::exp(neg - pos));
    est.lost_bits = (est.log_sum - est.log_value) / std::numbers::ln2;
  }
  if (!est.positive || !std::isfinite(est.log_value)) {
    est.positive = false;
    est.significant_bits = -kInf;
    return est;
  }
  // Exponent rounding only matters once the sum starts to cancel.
  const double noise = std::log2(2.0 * j + 2.0) +
                       (est.lost_bits > 1.0 ? std::log2(1.0 + max_abs) : 0.0);
  est.significant_bits = 52.0 - noise - est.lost_bits;
  return est;
}

struct ExtendedResult {
  bool positive = false;
  double log_value = -kInf;
  double lost_bits = 0.0;
  bool clampable = false;
};

ExtendedResult extended_moment(std::uint32_t j, double slope, long precision,
                               double clamp_tolerance) {
  const auto p = static_cast<mpfr_prec_t>(precision);
  MpfrValue u(p), e(p), pw(p), term(p), pos(p), neg(p), biggest(p);
  MpzValue binom;
  mpfr_set_d(u.get(), 2.0 * slope, MPFR_RNDN);
  mpfr_exp(u.get(), u.get(), MPFR_RNDN);
  mpfr_set_ui(e.get(), 1, MPFR_RNDN);
  mpfr_set_ui(pw.get(), 1, MPFR_RNDN);
  mpfr_set_zero(pos.get(), 1);
  mpfr_set_zero(neg.get(), 1);
  mpfr_set_zero(biggest.get(), 1);

  // e holds exp((i-1) i slope) = u^{i(i-1)/2}; pw holds u^i.
  for (std::uint32_t i = 0; i <= j; ++i) {
    if (i > 0) {
      mpz_mul_ui(binom.get(), binom.get(), j - i + 1);
      mpz_divexact_ui(binom.get(), binom.get(), i);
    }
    mpfr_mul_z(term.get(), e.get(), binom.get(), MPFR_RNDN);
    mpfr_ptr acc = (j - i) % 2 == 0 ? pos.get() : neg.get();
    mpfr_add(acc, acc, term.get(), MPFR_RNDN);
    mpfr_max(biggest.get(), biggest.get(), term.get(), MPFR_RNDN);
    mpfr_mul(e.get(), e.get(), pw.get(), MPFR_RNDN);
    mpfr_mul(pw.get(), pw.get(), u.get(), MPFR_RNDN);
  }

  ExtendedResult out;
  mpfr_sub(term.get(), pos.get(), neg.get(), MPFR_RNDN);
  mpfr_add(pos.get(), pos.get(), neg.get(), MPFR_RNDN);  // sum of magnitudes
  if (mpfr_sgn(term.get()) <= 0) {
    mpfr_abs(term.get(), term.get(), MPFR_RNDN);
    mpfr_mul_d(biggest.get(), biggest.get(), clamp_tolerance, MPFR_RNDN);
    out.clampable = mpfr_lessequal_p(term.get(), biggest.get()) != 0;
    return out;
  }
  out.positive = true;
  out.lost_bits =
      static_cast<double>(mpfr_get_exp(pos.get()) - mpfr_get_exp(term.get()) + 1);
  mpfr_log(term.get(), term.get(), MPFR_RNDN);
  out.log_value = mpfr_get_d(term.get(), MPFR_RNDN);
  return out;
}

// Rough log B(j) for small slopes, where B(2m) ~ (2m-1)!! (2 slope)^m.
double small_slope_log_estimate(std::uint32_t j, double slope) {
  const double m = std::ceil(j / 2.0);
  return std::lgamma(2.0 * m + 1.0) - std::lgamma(m + 1.0) - m * std::numbers::ln2 +
         m * std::log(2.0 * slope);
}

}  // namespace

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log1p_exp(double x) {
  if (x > 36.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

double log_expm1(double x) {
  if (x > 1.0) return x + std::log(-std::expm1(-x));
  return std::log(std::expm1(x));
}

std::vector<double> log_binomial_row(std::uint32_t n) {
  std::vector<double> row(n + 1, 0.0);
  if (n <= kExactBinomialLimit) {
    double c = 1.0;
    for (std::uint32_t k = 1; k <= n / 2; ++k) {
      c = c * static_cast<double>(n - k + 1) / static_cast<double>(k);
      row[k] = std::log(c);
    }
  } else {
    const double ln = std::lgamma(n + 1.0);
    for (std::uint32_t k = 1; k <= n / 2; ++k) {
      row[k] = ln - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    }
  }
  for (std::uint32_t k = n / 2 + 1; k <= n; ++k) row[k] = row[n - k];
  return row;
}

MomentValue log_central_moment(std::uint32_t j, double slope, const MomentOptions& options) {
  if (!(slope >= 0.0) || std::isnan(slope)) {
    throw Error(ErrorKind::kValue, "moment slope must be >= 0");
  }
  if (j == 0) return {0.0, false, 53};
  if (j == 1 || slope == 0.0) return {-kInf, false, 53};
  if (std::isinf(slope)) return {kInf, false, 53};

  const DoubleEstimate est = double_moment(j, slope);
  if (est.positive && est.significant_bits >= options.min_significant_bits) {
    return {est.log_value, false, 53};
  }

  const double slack = std::log2(4.0 * j + 8.0);
  double lost_guess = est.positive
                          ? est.lost_bits
                          : (est.log_sum - small_slope_log_estimate(j, slope)) /
                                std::numbers::ln2;
  if (!std::isfinite(lost_guess) || lost_guess < 0.0) lost_guess = 0.0;
  long precision = std::max<long>(
      256, static_cast<long>(std::ceil(lost_guess + options.target_bits + slack + 32.0)));

  for (;;) {
    precision = std::min(precision, options.max_precision_bits);
    const ExtendedResult r = extended_moment(j, slope, precision, options.clamp_tolerance);
    if (r.positive) {
      const double achieved = static_cast<double>(precision) - r.lost_bits - slack;
      if (achieved >= options.target_bits) return {r.log_value, true, precision};
    }
    if (precision >= options.max_precision_bits) {
      if (!r.positive && r.clampable) return {-kInf, true, precision};
      throw Error(ErrorKind::kPrecision,
                  "moment B(" + std::to_string(j) + ") at slope " + std::to_string(slope) +
                      " did not converge within " + std::to_string(precision) + " bits");
    }
    long next = precision * 2;
    if (r.positive) {
      next = std::max<long>(
          precision + precision / 2,
          static_cast<long>(std::ceil(r.lost_bits + options.target_bits + slack + 32.0)));
    }
    precision = next;
  }
}

SubsampledGaussian::SubsampledGaussian(double slope, double p, MomentOptions options)
    : slope_(slope), log_p_(std::log(p)), options_(options) {}

double SubsampledGaussian::log_moment(std::uint32_t j) {
  const bool cacheable = j % 2 == 0;
  const std::size_t slot = j / 2;
  if (cacheable && slot < even_cache_.size() && even_cache_[slot].has_value()) {
    const double v = *even_cache_[slot];
    if (std::isnan(v)) throw Error(ErrorKind::kPrecision, last_failure_);
    return v;
  }
  if (cacheable && slot >= even_cache_.size()) even_cache_.resize(slot + 1);
  try {
    const MomentValue m = log_central_moment(j, slope_, options_);
    ++evaluated_count_;
    if (m.extended) {
      ++extended_count_;
      max_bits_ = std::max(max_bits_, m.precision_bits);
    }
    if (cacheable) even_cache_[slot] = m.log_value;
    return m.log_value;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kPrecision) throw;
    last_failure_ = e.what();
    if (cacheable) even_cache_[slot] = std::numeric_limits<double>::quiet_NaN();
    throw;
  }
}

double SubsampledGaussian::log_g(std::uint32_t alpha) {
  if (alpha < 3) return -kInf;
  const std::vector<double> lc = log_binomial_row(alpha);
  std::vector<double> terms;
  terms.reserve(alpha);
  for (std::uint32_t j = 3; j <= alpha; ++j) {
    const double lo = log_moment(2 * (j / 2));
    const double hi = log_moment(2 * ((j + 1) / 2));
    if (lo == -kInf || hi == -kInf) continue;
    terms.push_back(j * log_p_ + lc[j] + 0.5 * (lo + hi));
  }
  double m = -kInf;
  for (double x : terms) m = std::max(m, x);
  if (m == -kInf || std::isinf(m)) return m;
  double s = 0.0;
  for (double x : terms) s += std::exp(x - m);
  return m + std::log(s);
}

double SubsampledGaussian::eps_prime(std::uint32_t alpha) {
  if (alpha < 2) throw Error(ErrorKind::kValue, "order must be at least 2");
  if (slope_ == 0.0) return 0.0;
  if (std::isinf(slope_)) return kInf;
  const double a = static_cast<double>(alpha);
  const double two_slope = 2.0 * slope_;
  const double log_arm = std::min(std::log(4.0) + log_expm1(two_slope),
                                  std::numbers::ln2 + two_slope);
  const double second = 2.0 * log_p_ + std::log(a * (a - 1.0) / 2.0) + log_arm;
  const double higher = alpha >= 3 ? std::log(4.0) + log_g(alpha) : -kInf;
  return log1p_exp(log_sum_exp(second, higher)) / (a - 1.0);
}

RdpCurve SubsampledGaussian::curve(std::uint32_t alpha_max) {
  RdpCurve out;
  out.reserve(alpha_max);
  for (std::uint32_t a = 2; a <= alpha_max; ++a) {
    try {
      out.push_back({a, eps_prime(a)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kPrecision) throw;
      ++failed_orders_;
    }
  }
  return out;
}

}  // namespace dpcda::accountant::detail
