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

#include "dpcda/accountant.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "dpcda/error.hpp"
#include "moments.hpp"

namespace dpcda::accountant {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

detail::MomentOptions moment_options(const AccountingParams& params) {
  detail::MomentOptions options;
  options.min_significant_bits = params.min_significant_bits;
  return options;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::kValue, message);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PrivacyReport non_private_report(const AccountingParams& params) {
  PrivacyReport report;
  report.epsilon = kInf;
  report.delta = params.delta;
  report.params = params;
  report.non_private = true;
  report.precision_note = "zero noise scale: no finite guarantee";
  return report;
}

std::string precision_note(const detail::SubsampledGaussian& sg) {
  std::ostringstream note;
  note << "log-space double moments";
  if (sg.extended_moments() == 0) {
    note << "; no extended precision needed";
  } else {
    note << "; " << sg.extended_moments() << " of " << sg.evaluated_moments()
         << " re-evaluated with MPFR (max " << sg.max_precision_bits() << " bits)";
  }
  if (sg.failed_orders() > 0) {
    note << "; " << sg.failed_orders() << " orders skipped: " << sg.last_failure();
  }
  return note.str();
}

PrivacyReport account_with_slope(const AccountingParams& params, double slope) {
  if (std::isinf(slope)) return non_private_report(params);
  detail::SubsampledGaussian sg(slope, params.sampling_ratio(), moment_options(params));
  const RdpCurve curve = sg.curve(params.alpha_max);
  const bool usable = std::any_of(curve.begin(), curve.end(),
                                  [](const RdpPoint& p) { return p.alpha >= 3; });
  if (!usable) {
    throw Error(ErrorKind::kPrecision,
                "no order could be evaluated: " + sg.last_failure());
  }
  PrivacyReport report = convert_rdp_curve(curve, params.t, params.delta);
  report.params = params;
  report.precision_note = precision_note(sg);
  return report;
}

}  // namespace

double AccountingParams::sampling_ratio() const {
  const std::uint64_t pool = sampling == SamplingMode::kPerClass ? min_class_size : n;
  if (pool == 0) throw Error(ErrorKind::kValue, "sampling pool size must be positive");
  return static_cast<double>(l) / static_cast<double>(pool);
}

void AccountingParams::validate() const {
  require(l >= 1, "l must be at least 1");
  require(c > 0.0 && std::isfinite(c), "c must be finite and > 0");
  require(sigma_x >= 0.0 && std::isfinite(sigma_x), "sigma_x must be finite and >= 0");
  require(sigma_y >= 0.0 && std::isfinite(sigma_y), "sigma_y must be finite and >= 0");
  require(n >= 1, "N must be at least 1");
  require(t >= 1, "T must be at least 1");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(alpha_max >= 3 && alpha_max <= kMaxAlpha,
          "alpha_max must lie in 3.." + std::to_string(kMaxAlpha));
  if (sampling == SamplingMode::kPerClass) {
    require(min_class_size >= 1, "per-class sampling needs the smallest class size");
    require(min_class_size >= l, "l exceeds the smallest class size");
    require(min_class_size <= n, "smallest class size exceeds N");
  } else {
    require(l <= n, "l exceeds N");
  }
  require(min_significant_bits > 0.0 && min_significant_bits <= 52.0,
          "min_significant_bits must lie in (0, 52]");
}

double rdp_slope(const AccountingParams& params) {
  if (params.sigma_x == 0.0 || params.sigma_y == 0.0) return kInf;
  const double l2 = static_cast<double>(params.l) * params.l;
  return (2.0 * params.c * params.c / (params.sigma_x * params.sigma_x) +
          1.0 / (params.sigma_y * params.sigma_y)) /
         l2;
}

double baseline_rdp_slope(const AccountingParams& params, std::uint64_t d_x,
                          std::uint64_t d_y) {
  if (params.sigma_x == 0.0 || params.sigma_y == 0.0) return kInf;
  const double l2 = static_cast<double>(params.l) * params.l;
  return (static_cast<double>(d_x) / (params.sigma_x * params.sigma_x) +
          static_cast<double>(d_y) / (params.sigma_y * params.sigma_y)) /
         (2.0 * l2);
}

double base_rdp_epsilon(std::uint32_t alpha, const AccountingParams& params) {
  if (alpha == 0) return 0.0;
  return static_cast<double>(alpha) * rdp_slope(params);
}

double log_moment_term_B(std::uint32_t j, const AccountingParams& params) {
  return detail::log_central_moment(j, rdp_slope(params), moment_options(params)).log_value;
}

double moment_term_B(std::uint32_t j, const AccountingParams& params) {
  return std::exp(log_moment_term_B(j, params));
}

double log_higher_order_G(std::uint32_t alpha, const AccountingParams& params) {
  detail::SubsampledGaussian sg(rdp_slope(params), params.sampling_ratio(),
                                moment_options(params));
  return sg.log_g(alpha);
}

double higher_order_G(std::uint32_t alpha, const AccountingParams& params) {
  return std::exp(log_higher_order_G(alpha, params));
}

double subsampled_rdp_epsilon(std::uint32_t alpha, const AccountingParams& params) {
  detail::SubsampledGaussian sg(rdp_slope(params), params.sampling_ratio(),
                                moment_options(params));
  return sg.eps_prime(alpha);
}

PrivacyReport convert_rdp_curve(const RdpCurve& curve, std::uint64_t t, double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(t >= 1, "T must be at least 1");
  PrivacyReport report;
  report.delta = delta;
  report.per_release_rdp = curve;
  report.epsilon = kInf;
  std::uint32_t largest = 0;
  const double log_inv_delta = -std::log(delta);
  for (const RdpPoint& p : curve) {
    if (p.alpha < 3) continue;
    if (std::isnan(p.epsilon)) {
      throw Error(ErrorKind::kPrecision,
                  "per-release curve is NaN at order " + std::to_string(p.alpha));
    }
    largest = std::max(largest, p.alpha);
    const double e = static_cast<double>(t) * p.epsilon +
                     log_inv_delta / (static_cast<double>(p.alpha) - 1.0);
    if (e < report.epsilon || report.alpha_star == 0) {
      report.epsilon = e;
      report.alpha_star = p.alpha;
    }
  }
  if (report.alpha_star == 0) {
    throw Error(ErrorKind::kPrecision, "curve has no order >= 3");
  }
  report.boundary_minimum = report.alpha_star == largest;
  return report;
}

PrivacyReport compose_and_convert(const AccountingParams& params) {
  params.validate();
  return account_with_slope(params, rdp_slope(params));
}

PrivacyReport baseline_lee_epsilon(const AccountingParams& params, std::uint64_t d_x,
                                   std::uint64_t d_y) {
  params.validate();
  require(d_x >= 1 && d_y >= 1, "baseline dimensions must be positive");
  return account_with_slope(params, baseline_rdp_slope(params, d_x, d_y));
}

double calibration_tolerance(double target_epsilon) {
  return std::max(1e-4, 1e-3 * target_epsilon);
}

CalibrationResult calibrate_noise(const CalibrationRequest& request) {
  require(request.target_epsilon > 0.0 && std::isfinite(request.target_epsilon),
          "target epsilon must be finite and > 0");
  require(request.ratio > 0.0 && std::isfinite(request.ratio), "ratio must be finite and > 0");
  require(request.sigma_lo > 0.0 && request.sigma_hi > request.sigma_lo,
          "sigma bracket must satisfy 0 < lo < hi");
  require(request.max_iterations >= 1, "max_iterations must be positive");

  const double target = request.target_epsilon;
  const double tolerance = calibration_tolerance(target);
  auto evaluate = [&](double sigma) {
    AccountingParams p = request.params;
    p.sigma_x = sigma;
    p.sigma_y = request.ratio * sigma;
    return compose_and_convert(p);
  };

  CalibrationResult result;
  PrivacyReport hi_report = evaluate(request.sigma_hi);
  if (hi_report.epsilon > target) {
    std::ostringstream msg;
    msg << "target epsilon " << target << " is unreachable: epsilon at sigma_x = "
        << request.sigma_hi << " is " << hi_report.epsilon << " (floor log(1/delta)/(alpha_max-1) = "
        << -std::log(request.params.delta) / (request.params.alpha_max - 1.0) << ")";
    throw Error(ErrorKind::kCalibration, msg.str());
  }
  PrivacyReport lo_report = evaluate(request.sigma_lo);
  if (lo_report.epsilon <= target) {
    result.sigma_x = request.sigma_lo;
    result.sigma_y = request.ratio * request.sigma_lo;
    result.report = std::move(lo_report);
    result.bracket_hit = true;
    return result;
  }

  double lo = std::log(request.sigma_lo);
  double hi = std::log(request.sigma_hi);
  int it = 0;
  for (; it < request.max_iterations && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    PrivacyReport r = evaluate(std::exp(mid));
    if (r.epsilon > target) {
      lo = mid;
    } else {
      hi = mid;
      hi_report = std::move(r);
      if (target - hi_report.epsilon <= 1e-3 * tolerance) {
        ++it;
        break;
      }
    }
  }
  if (std::abs(hi_report.epsilon - target) > tolerance) {
    std::ostringstream msg;
    msg << "calibration did not reach epsilon " << target << " within " << tolerance
        << " after " << it << " iterations (best " << hi_report.epsilon << ")";
    throw Error(ErrorKind::kCalibration, msg.str());
  }
  result.sigma_x = std::exp(hi);
  result.sigma_y = request.ratio * result.sigma_x;
  result.report = std::move(hi_report);
  result.iterations = it;
  return result;
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const AccountingParams& base,
                            unsigned threads) {
  require(grid.ratio > 0.0 && std::isfinite(grid.ratio), "ratio must be finite and > 0");
  std::vector<SweepRow> rows(grid.l_values.size() * grid.sigma_values.size());
  for (std::size_t a = 0; a < grid.l_values.size(); ++a) {
    for (std::size_t b = 0; b < grid.sigma_values.size(); ++b) {
      SweepRow& row = rows[a * grid.sigma_values.size() + b];
      row.l = grid.l_values[a];
      row.sigma_x = grid.sigma_values[b];
      row.sigma_y = grid.ratio * grid.sigma_values[b];
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      AccountingParams p = base;
      p.l = row.l;
      p.sigma_x = row.sigma_x;
      p.sigma_y = row.sigma_y;
      try {
        const PrivacyReport r = compose_and_convert(p);
        row.epsilon = r.epsilon;
        row.alpha_star = r.alpha_star;
        row.status = r.non_private ? "non-private" : r.boundary_minimum ? "boundary" : "ok";
      } catch (const Error& e) {
        row.epsilon = std::numeric_limits<double>::quiet_NaN();
        row.status = std::string("error: ") + e.what();
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "l,sigma_x,sigma_y,alpha_star,epsilon,status\n";
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out += std::to_string(r.l) + ',' + format_double(r.sigma_x) + ',' +
           format_double(r.sigma_y) + ',' + std::to_string(r.alpha_star) + ',' +
           format_double(r.epsilon) + ',' + status + '\n';
  }
  return out;
}

nlohmann::json to_json(const AccountingParams& params) {
  nlohmann::json j = {
      {"l", params.l},
      {"c", params.c},
      {"sigma_x", params.sigma_x},
      {"sigma_y", params.sigma_y},
      {"n", params.n},
      {"t", params.t},
      {"delta", params.delta},
      {"alpha_max", params.alpha_max},
      {"sampling", params.sampling == SamplingMode::kPerClass ? "per-class" : "global"},
      {"min_significant_bits", params.min_significant_bits},
  };
  if (params.sampling == SamplingMode::kPerClass) j["min_class_size"] = params.min_class_size;
  return j;
}

AccountingParams params_from_json(const nlohmann::json& j) {
  AccountingParams p;
  try {
    p.l = j.value("l", p.l);
    p.c = j.value("c", p.c);
    p.sigma_x = j.value("sigma_x", p.sigma_x);
    p.sigma_y = j.value("sigma_y", p.sigma_y);
    p.n = j.value("n", p.n);
    p.t = j.value("t", p.t);
    p.delta = j.value("delta", p.delta);
    p.alpha_max = j.value("alpha_max", p.alpha_max);
    p.min_class_size = j.value("min_class_size", p.min_class_size);
    p.min_significant_bits = j.value("min_significant_bits", p.min_significant_bits);
    const std::string sampling = j.value("sampling", std::string("global"));
    if (sampling == "per-class") {
      p.sampling = SamplingMode::kPerClass;
    } else if (sampling != "global") {
      throw Error(ErrorKind::kValue, "unknown sampling mode '" + sampling + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("accounting parameters: ") + e.what());
  }
  return p;
}

nlohmann::json to_json(const PrivacyReport& report, bool include_curve) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json j = {
      {"epsilon", number(report.epsilon)},
      {"delta", report.delta},
      {"alpha_star", report.alpha_star},
      {"boundary_minimum", report.boundary_minimum},
      {"non_private", report.non_private},
      {"precision_note", report.precision_note},
      {"params", to_json(report.params)},
  };
  if (report.baseline_epsilon) j["baseline_epsilon"] = number(*report.baseline_epsilon);
  if (include_curve) {
    nlohmann::json curve = nlohmann::json::array();
    for (const RdpPoint& p : report.per_release_rdp) {
      curve.push_back({p.alpha, number(p.epsilon)});
    }
    j["per_release_rdp"] = std::move(curve);
  }
  return j;
}

}  // namespace dpcda::accountant
