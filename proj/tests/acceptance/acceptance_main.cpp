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

// Acceptance gate: one PASS/FAIL line per criterion, with wall time against
// its budget. Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpcda/accountant.hpp"
#include "dpcda/cli.hpp"
#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"
#include "dpcda/synthesizer.hpp"
#include "fixtures.hpp"

namespace acc = dpcda::accountant;
namespace t = dpcda::testing;
using nlohmann::json;

namespace {

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
    ++checked_;
  }
  int failed() const { return failed_; }
  int checked() const { return checked_; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  int failed_ = 0;
  int checked_ = 0;
  std::vector<std::string> failures_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

acc::AccountingParams params_for(std::uint32_t l, double sx, double sy, std::uint64_t n = 60000,
                                 std::uint64_t tt = 60000) {
  acc::AccountingParams p;
  p.l = l;
  p.sigma_x = sx;
  p.sigma_y = sy;
  p.n = n;
  p.t = tt;
  return p;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, i / (count - 1.0)));
  return v;
}

const std::vector<std::uint32_t> kPowersOfTwo = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};

void identities(Checker& c) {
  for (double sigma : {0.05, 0.3, 1.0, 5.0}) {
    for (std::uint32_t l : {1u, 4u, 512u}) {
      const auto p = params_for(l, sigma, sigma);
      const std::string at = " (l=" + std::to_string(l) + ", sigma=" + num(sigma) + ")";
      c.expect(acc::moment_term_B(1, p) == 0.0, "B(1) != 0" + at);
      const double e2 = acc::base_rdp_epsilon(2, p);
      const double want = std::expm1(e2);
      const double got = acc::moment_term_B(2, p);
      if (std::isfinite(want)) {
        c.expect(t::relative_error(got, want) <= 1e-12, "B(2) = " + num(got) + at);
      } else {
        const double log_want = e2 + std::log(-std::expm1(-e2));
        c.expect(t::relative_error(acc::log_moment_term_B(2, p), log_want) <= 1e-12,
                 "log B(2)" + at);
      }
      c.expect(acc::higher_order_G(2, p) == 0.0, "G(2) != 0" + at);
    }
  }
  for (std::uint32_t a : {2u, 3u, 4u, 8u, 16u, 64u}) {
    const double e = acc::subsampled_rdp_epsilon(a, params_for(4, 1e6, 1e6));
    c.expect(e >= 0.0 && e <= 1e-9, "eps'(" + std::to_string(a) + ") = " + num(e) + " at sigma 1e6");
  }
}

void oracle_equivalence(Checker& c) {
  const json& cases = t::oracle_cases()["randomized"];
  c.expect(cases.size() >= 10, "fewer than 10 oracle cases");
  for (const json& k : cases) {
    auto p = params_for(k["l"], k["sigma_x"], k["sigma_y"], k["n"], k["t"]);
    p.c = k["c"];
    p.delta = k["delta"];
    p.alpha_max = k["alpha_max"];
    const acc::PrivacyReport r = acc::compose_and_convert(p);
    const std::string label = k["label"];
    const double want = k["epsilon"];
    c.expect(t::relative_error(r.epsilon, want) <= 1e-6,
             label + ": epsilon " + num(r.epsilon) + " vs " + num(want));
    c.expect(r.alpha_star == k["alpha_star"].get<std::uint32_t>(), label + ": alpha_star");
  }
}

void monotonicity(Checker& c) {
  for (double sigma : log_grid(0.05, 5.0, 10)) {
    for (std::uint32_t l : kPowersOfTwo) {
      const std::string at = " (l=" + std::to_string(l) + ", sigma=" + num(sigma) + ")";
      auto p = params_for(l, sigma, sigma);
      const double base = acc::compose_and_convert(p).epsilon;
      auto doubled = p;
      doubled.sigma_x *= 2.0;
      const double e_doubled = acc::compose_and_convert(doubled).epsilon;
      c.expect(e_doubled <= base, "doubling sigma_x raised epsilon" + at);
      auto tight = p;
      tight.delta = 1e-6;
      auto loose = p;
      loose.delta = 1e-4;
      const double e_tight = acc::compose_and_convert(tight).epsilon;
      const double e_loose = acc::compose_and_convert(loose).epsilon;
      c.expect(e_loose <= base && base <= e_tight, "raising delta raised epsilon" + at);
    }
  }
}

void tightness(Checker& c) {
  for (std::uint32_t l = 2; l <= 512; l *= 2) {
    for (double sigma : {0.1, 0.3, 1.0}) {
      const auto p = params_for(l, sigma, sigma);
      const double ours = acc::compose_and_convert(p).epsilon;
      const double base = acc::baseline_lee_epsilon(p, 784, 10).epsilon;
      c.expect(ours < base, "l=" + std::to_string(l) + ", sigma=" + num(sigma) + ": " +
                                num(ours) + " >= baseline " + num(base));
    }
  }
}

void calibration(Checker& c) {
  for (double target : {10.0, 20.0}) {
    acc::CalibrationRequest req;
    req.target_epsilon = target;
    req.params = params_for(4, 1.0, 1.0);
    const acc::CalibrationResult cal = acc::calibrate_noise(req);
    const double e = acc::compose_and_convert(params_for(4, cal.sigma_x, cal.sigma_y)).epsilon;
    c.expect(t::relative_error(e, target) <= 1e-3,
             "target " + num(target) + ": sigma " + num(cal.sigma_x) + " gives " + num(e));
  }
}

double chi_square(const std::vector<long>& counts, double expected) {
  double s = 0.0;
  for (long k : counts) s += (k - expected) * (k - expected) / expected;
  return s;
}

dpcda::SynthesisConfig config(std::uint32_t l, std::uint64_t tt, double sx, double sy) {
  dpcda::SynthesisConfig cfg;
  cfg.l = l;
  cfg.t = tt;
  cfg.sigma_x = sx;
  cfg.sigma_y = sy;
  cfg.seed = 2024;
  return cfg;
}

void synthesis(Checker& c) {
  const std::vector<std::size_t> sizes = {250, 250, 250, 250};
  const dpcda::Dataset ds = t::toy_dataset(sizes, 16, 99);
  const std::size_t d = ds.dim();

  const auto noisy = dpcda::synthesize_dataset(ds, config(4, 1003, 0.5, 0.5));
  const auto counts = dpcda::class_sample_counts(1003, 4);
  long lo = counts[0], hi = counts[0], sum = 0;
  for (auto k : counts) {
    lo = std::min<long>(lo, k);
    hi = std::max<long>(hi, k);
    sum += k;
  }
  c.expect(hi - lo <= 1 && sum == 1003, "class counts unbalanced");
  c.expect(noisy.metadata["class_counts"] == json(counts), "metadata class counts");

  const auto one = dpcda::encode_container(dpcda::synthesize_dataset(ds, config(4, 1000, 0.5, 0.5), 1));
  const auto eight = dpcda::encode_container(dpcda::synthesize_dataset(ds, config(4, 1000, 0.5, 0.5), 8));
  c.expect(one == eight, "1 vs 8 threads differ");

  // Identity at l = 1: every sample is a row of its own class.
  const auto ident = dpcda::synthesize_dataset(ds, config(1, 200, 0.0, 0.0));
  for (std::size_t s = 0; s < ident.size(); ++s) {
    bool found = false;
    for (std::size_t i = 0; i < ds.size() && !found; ++i) {
      if (ds.labels[i] != ident.labels[s]) continue;
      bool same = true;
      for (std::size_t j = 0; j < d && same; ++j) same = ds.features(i, j) == ident.features(s, j);
      found = same;
    }
    c.expect(found, "l=1 sample " + std::to_string(s) + " is not an input row");
  }

  // Centroid at l = N_k; rows are summed in sampled order.
  const auto centre = dpcda::synthesize_dataset(ds, config(250, 40, 0.0, 0.0));
  std::vector<std::vector<double>> means(4, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) means[ds.labels[i] - 1][j] += ds.features(i, j) / 250.0;
  }
  for (std::size_t s = 0; s < centre.size(); ++s) {
    for (std::size_t j = 0; j < d; ++j) {
      const double want = means[centre.labels[s] - 1][j];
      c.expect(std::abs(centre.features(s, j) - want) <= 1e-14 * std::max(1.0, std::abs(want)),
               "centroid mismatch at sample " + std::to_string(s));
    }
  }

  // Label purity at sigma_y = 0: sample s comes from the class whose block holds it.
  const auto pure = dpcda::synthesize_dataset(ds, config(8, 1000, 2.0, 0.0));
  std::size_t s = 0;
  for (std::uint32_t k = 0; k < 4; ++k) {
    for (std::uint64_t i = 0; i < dpcda::class_sample_counts(1000, 4)[k]; ++i, ++s) {
      c.expect(pure.labels[s] == k + 1, "impure label at sample " + std::to_string(s));
    }
  }

  // Uniform sampling within a 4-element class. Critical values at p = 0.001.
  const std::vector<std::size_t> cls = {10, 11, 12, 13};
  const int draws = 40000;
  std::vector<long> singles(4, 0);
  std::map<std::pair<std::size_t, std::size_t>, long> pairs;
  for (int i = 0; i < draws; ++i) {
    dpcda::RandomStream a = dpcda::RandomStream::derive(7, 1, static_cast<std::uint64_t>(i));
    ++singles[dpcda::sample_indices(cls, 1, a)[0] - 10];
    dpcda::RandomStream b = dpcda::RandomStream::derive(7, 2, static_cast<std::uint64_t>(i));
    const auto p = dpcda::sample_indices(cls, 2, b);
    ++pairs[{std::min(p[0], p[1]), std::max(p[0], p[1])}];
  }
  const double x1 = chi_square(singles, draws / 4.0);
  c.expect(x1 <= 16.266, "l=1 chi-square " + num(x1));
  std::vector<long> pair_counts;
  for (const auto& [key, v] : pairs) pair_counts.push_back(v);
  const double x2 = chi_square(pair_counts, draws / 6.0);
  c.expect(pair_counts.size() == 6 && x2 <= 20.515, "l=2 chi-square " + num(x2));
}

void io_round_trips(Checker& c) {
  t::TempDir dir;
  dpcda::SyntheticDataset ds;
  ds.features = dpcda::Matrix(37, 784);
  ds.labels.resize(37);
  ds.class_count = 10;
  for (std::size_t i = 0; i < 37; ++i) {
    ds.labels[i] = static_cast<std::uint32_t>(i % 10 + 1);
    for (std::size_t j = 0; j < 784; ++j) ds.features(i, j) = std::sin(0.37 * i + 0.011 * j) * 3.0;
  }
  ds.metadata = {{"purpose", "acceptance"}};
  dpcda::write_synthetic(ds, dir / "c.bin");
  const auto back = dpcda::read_synthetic(dir / "c.bin");
  bool same = back.size() == ds.size() && back.dim() == ds.dim() && back.labels == ds.labels &&
              back.class_count == ds.class_count && back.metadata == ds.metadata;
  for (std::size_t k = 0; same && k < ds.features.values().size(); ++k) {
    same = back.features.values()[k] == static_cast<double>(static_cast<float>(ds.features.values()[k]));
  }
  c.expect(same, "container round-trip");
  c.expect(dpcda::encode_container(back) == t::read_bytes(dir / "c.bin"), "container re-encode");

  const json& exp = t::fixture_expectations();
  const auto fixtures = t::data_dir() / "fixtures";
  const auto idx = dpcda::load_idx(fixtures / "idx3-images.idx", fixtures / "idx3-labels.idx");
  bool idx_ok = idx.size() == 3 && idx.dim() == 6;
  for (std::size_t i = 0; idx_ok && i < 3; ++i) {
    idx_ok = idx.labels[i] == exp["idx3"]["labels"][i].get<std::uint32_t>();
    for (std::size_t j = 0; idx_ok && j < 6; ++j) {
      idx_ok = idx.features(i, j) == exp["idx3"]["features"][i][j].get<double>();
    }
  }
  c.expect(idx_ok, "IDX fixture");

  const auto cifar = dpcda::load_cifar10_batches({fixtures / "cifar2.bin"});
  const auto raw = t::read_bytes(fixtures / "cifar2.bin");
  bool cifar_ok = cifar.size() == 2 && cifar.dim() == dpcda::kCifarPixels;
  for (std::size_t r = 0; cifar_ok && r < 2; ++r) {
    cifar_ok = cifar.labels[r] == exp["cifar2"]["labels"][r].get<std::uint32_t>();
    for (std::size_t j = 0; cifar_ok && j < dpcda::kCifarPixels; ++j) {
      cifar_ok = cifar.features(r, j) == raw[r * dpcda::kCifarRecordBytes + 1 + j];
    }
  }
  c.expect(cifar_ok, "CIFAR fixture");

  dpcda::PreviewGrid grid{3, 4, 28, 28, 0.0, 0.0};
  dpcda::render_preview_grid(back, grid, dir / "p.pgm");
  const auto pgm = t::read_bytes(dir / "p.pgm");
  const std::string header = "P5\n112 84\n255\n";
  c.expect(pgm.size() == header.size() + 112 * 84 &&
               std::string(pgm.begin(), pgm.begin() + header.size()) == header,
           "PGM header or size");
  std::uint8_t lo = 255, hi = 0;
  for (std::size_t i = header.size(); i < pgm.size(); ++i) {
    lo = std::min(lo, pgm[i]);
    hi = std::max(hi, pgm[i]);
  }
  c.expect(lo == 0 && hi == 255, "PGM not scaled to the full range");
  c.expect(grid.pixel_min < grid.pixel_max, "PGM scaling range");
}

void grid_sweep(Checker& c) {
  std::ostringstream out, err;
  const int code = dpcda::cli::run_command(
      {"sweep", "--n", "60000", "--t", "60000", "--alpha-max", "256", "--sigma-min", "0.1",
       "--sigma-max", "10", "--sigma-count", "9"},
      out, err);
  c.expect(code == 0, "sweep exit code " + std::to_string(code) + ": " + err.str());
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  c.expect(line == "l,sigma_x,sigma_y,alpha_star,epsilon,status", "sweep header");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const std::string status = line.substr(line.rfind(',') + 1);
    c.expect(status == "ok" || status == "boundary", "row " + line);
    std::vector<std::string> cells;
    std::stringstream cs(line);
    for (std::string cell; std::getline(cs, cell, ',');) cells.push_back(cell);
    c.expect(cells.size() == 6 && std::isfinite(std::stod(cells[4])), "bad row " + line);
  }
  c.expect(rows == 10 * 9, "sweep rows " + std::to_string(rows));
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<void(Checker&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"accountant identities", 1.0, identities},
      {"oracle equivalence (10 randomized, 1e-6)", 60.0, oracle_equivalence},
      {"monotonicity (10x10 grid)", 120.0, monotonicity},
      {"tightness vs baseline", 120.0, tightness},
      {"calibration round-trip", 60.0, calibration},
      {"synthesis properties", 120.0, synthesis},
      {"io round-trips", 30.0, io_round_trips},
      {"sweep over l = 1..512", 300.0, grid_sweep},
  };
  int failed = 0;
  for (const Criterion& k : criteria) {
    Checker c;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.run(c);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= k.budget_seconds;
    const bool ok = error.empty() && c.failed() == 0 && in_time;
    std::printf("%s  %-42s %8.3f s (budget %g s, %d checks)", ok ? "PASS" : "FAIL", k.name,
                seconds, k.budget_seconds, c.checked());
    if (!error.empty()) std::printf("  exception: %s", error.c_str());
    if (c.failed() > 0) std::printf("  %d failed: %s", c.failed(), c.summary().c_str());
    if (!in_time) std::printf("  over budget");
    std::printf("\n");
    if (!ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
