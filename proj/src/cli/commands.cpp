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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dataset_io/file_util.hpp"
#include "dpcda/accountant.hpp"
#include "dpcda/cli.hpp"
#include "dpcda/dataset_io.hpp"
#include "dpcda/manifest.hpp"
#include "dpcda/preprocess.hpp"
#include "dpcda/synthesizer.hpp"

namespace dpcda::cli {
namespace {

namespace acc = accountant;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

std::string fmt(double v, int digits = 17) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Flags shared by every accounting-based subcommand.
struct AccountingFlags {
  std::uint64_t n = 0;
  std::uint64_t t = 0;  // 0: same as n
  std::uint32_t l = 1;
  double c = 1.0;
  double delta = acc::kDefaultDelta;
  std::uint32_t alpha_max = acc::kDefaultAlphaMax;
  std::string p_mode = "global";
  std::uint64_t min_class_size = 0;
  double min_significant_bits = 40.0;

  void add_to(CLI::App* app, bool with_n, bool with_l) {
    if (with_n) app->add_option("--n", n, "Number of private records N")->required();
    app->add_option("--t", t, "Number of synthetic samples T (default: N)");
    if (with_l) app->add_option("--l", l, "Order of mixture l")->capture_default_str();
    app->add_option("--c", c, "Clipping bound")->capture_default_str();
    app->add_option("--delta", delta, "Target delta")->capture_default_str();
    app->add_option("--alpha-max", alpha_max, "Largest Renyi order searched")
        ->capture_default_str();
    app->add_option("--p-mode", p_mode, "Sampling ratio: l/N or l/min_k N_k")
        ->check(CLI::IsMember({"global", "per-class"}))
        ->capture_default_str();
    app->add_option("--min-class-size", min_class_size,
                    "Smallest class size, for --p-mode per-class");
    app->add_option("--min-significant-bits", min_significant_bits,
                    "Extended-precision threshold for moment evaluation")
        ->capture_default_str();
  }

  acc::AccountingParams params(double sigma_x, double sigma_y) const {
    acc::AccountingParams p;
    p.n = n;
    p.t = t == 0 ? n : t;
    p.l = l;
    p.c = c;
    p.sigma_x = sigma_x;
    p.sigma_y = sigma_y;
    p.delta = delta;
    p.alpha_max = alpha_max;
    p.sampling = p_mode == "per-class" ? acc::SamplingMode::kPerClass : acc::SamplingMode::kGlobal;
    p.min_class_size = min_class_size;
    p.min_significant_bits = min_significant_bits;
    return p;
  }
};

json run_parameters(const acc::AccountingParams& p) {
  json j = acc::to_json(p);
  j.erase("min_significant_bits");
  return j;
}

json report_for_manifest(const acc::PrivacyReport& report) {
  return acc::to_json(report, /*include_curve=*/false);
}

void print_report(std::ostream& out, const acc::PrivacyReport& report) {
  if (report.non_private) {
    out << "epsilon: inf (zero noise, no privacy guarantee)\n";
    return;
  }
  out << "epsilon: " << fmt(report.epsilon, 10) << " (delta = " << fmt(report.delta, 6) << ")\n";
  out << "alpha_star: " << report.alpha_star << "\n";
  out << "sampling_ratio: " << fmt(report.params.sampling_ratio(), 6) << "\n";
  if (report.boundary_minimum) {
    out << "warning: minimum at the largest order searched; raise --alpha-max\n";
  }
  out << "precision: " << report.precision_note << "\n";
}

std::vector<std::uint32_t> default_l_values() {
  std::vector<std::uint32_t> v;
  for (std::uint32_t l = 1; l <= 512; l *= 2) v.push_back(l);
  return v;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw Error(ErrorKind::kValue, "sigma range must satisfy 0 < min <= max and count >= 1");
  }
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v.push_back(lo * std::pow(hi / lo, f));
  }
  v.back() = hi;
  return v;
}

Dataset load_input(const std::string& format, const std::string& input,
                   const std::string& labels, const std::string& label_column) {
  if (format == "idx") {
    if (labels.empty()) throw Error(ErrorKind::kConfiguration, "--format idx needs --labels");
    return load_idx(input, labels);
  }
  if (format == "cifar10") {
    if (fs::is_directory(input)) return load_cifar10(input);
    return load_cifar10_batches({fs::path(input)});
  }
  const bool numeric = !label_column.empty() &&
                       std::all_of(label_column.begin(), label_column.end(),
                                   [](char ch) { return ch >= '0' && ch <= '9'; });
  if (numeric) return load_csv(input, ColumnRef(static_cast<std::size_t>(std::stoull(label_column))));
  return load_csv(input, ColumnRef(label_column));
}

void finish_manifest(RunManifest& m, Clock::time_point start, const fs::path& output) {
  m.tool_version = std::string(tool_version());
  m.duration_seconds = seconds_since(start);
  write_manifest(m, manifest_path_for(output));
}

// ---- synthesize ----

struct SynthesizeCmd {
  AccountingFlags acc_flags;
  std::string input, format, labels, label_column = "label", out, out_format = "container";
  std::optional<double> sigma_x, sigma_y, epsilon;
  double ratio = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void add_to(CLI::App* app) {
    app->add_option("--input", input, "Input file or directory")->required();
    app->add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"idx", "cifar10", "csv"}))
        ->required();
    app->add_option("--labels", labels, "IDX label file");
    app->add_option("--label-column", label_column, "CSV label column name or 0-based index")
        ->capture_default_str();
    acc_flags.add_to(app, /*with_n=*/false, /*with_l=*/true);
    app->add_option("--sigma-x", sigma_x, "Feature noise scale");
    app->add_option("--sigma-y", sigma_y, "Label noise scale");
    auto* eps = app->add_option("--epsilon,--target-epsilon", epsilon,
                                "Calibrate sigma_x = sigma_y / ratio to this epsilon");
    eps->excludes("--sigma-x")->excludes("--sigma-y");
    app->add_option("--ratio", ratio, "sigma_y / sigma_x used by --epsilon")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->required();
    app->add_option("--out", out, "Output path")->required();
    app->add_option("--out-format", out_format, "Output format")
        ->check(CLI::IsMember({"container", "csv"}))
        ->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  }

  int run(std::ostream& out_stream) {
    const auto start = Clock::now();
    if (!epsilon && (!sigma_x || !sigma_y)) {
      throw Error(ErrorKind::kConfiguration, "give either --epsilon or both --sigma-x and --sigma-y");
    }
    const Dataset raw = load_input(format, input, labels, label_column);
    raw.validate();
    const ClassIndex index = partition_by_class(raw.labels, raw.class_count);

    acc::AccountingParams params = acc_flags.params(0.0, 0.0);
    params.n = raw.size();
    params.t = acc_flags.t == 0 ? raw.size() : acc_flags.t;
    if (params.sampling == acc::SamplingMode::kPerClass) params.min_class_size = index.min_count();
    for (std::size_t k = 0; k < index.class_count(); ++k) {
      if (index.members[k].size() < params.l) {
        throw Error(ErrorKind::kInsufficientClassSize,
                    "insufficient class size: class " + std::to_string(k + 1) + " has " +
                        std::to_string(index.members[k].size()) + " rows but l = " +
                        std::to_string(params.l));
      }
    }

    acc::PrivacyReport report;
    int iterations = 0;
    if (epsilon) {
      acc::CalibrationRequest req;
      req.target_epsilon = *epsilon;
      req.ratio = ratio;
      req.params = params;
      const acc::CalibrationResult cal = acc::calibrate_noise(req);
      params.sigma_x = cal.sigma_x;
      params.sigma_y = cal.sigma_y;
      report = cal.report;
      iterations = cal.iterations;
    } else {
      params.sigma_x = *sigma_x;
      params.sigma_y = *sigma_y;
      report = acc::compose_and_convert(params);
    }

    SynthesisConfig cfg;
    cfg.l = params.l;
    cfg.t = params.t;
    cfg.sigma_x = params.sigma_x;
    cfg.sigma_y = params.sigma_y;
    cfg.clip.c = params.c;
    cfg.seed = seed;
    const Dataset prepared = preprocess(raw, cfg.clip);
    SyntheticDataset synth = synthesize_dataset(prepared, cfg, threads);
    synth.metadata["privacy_report"] = report_for_manifest(report);
    write_synthetic(synth, out,
                    out_format == "csv" ? SyntheticFormat::kCsv : SyntheticFormat::kContainer);

    RunManifest m;
    m.command = "synthesize";
    m.parameters = run_parameters(params);
    m.parameters["format"] = format;
    m.parameters["seed"] = seed;
    m.parameters["threads"] = threads;
    m.parameters["ratio"] = ratio;
    m.parameters["out_format"] = out_format;
    m.parameters["d_x"] = raw.dim();
    m.parameters["class_count"] = raw.class_count;
    if (epsilon) {
      m.parameters["target_epsilon"] = *epsilon;
      m.parameters["calibration_iterations"] = iterations;
    }
    m.inputs.push_back(input);
    if (!labels.empty()) m.inputs.push_back(labels);
    m.outputs.push_back(out);
    m.privacy_report = report_for_manifest(report);
    finish_manifest(m, start, out);

    out_stream << "wrote " << synth.size() << " samples (d = " << synth.dim()
               << ", K = " << synth.class_count << ") to " << out << "\n";
    out_stream << "sigma_x: " << fmt(params.sigma_x) << "\nsigma_y: " << fmt(params.sigma_y) << "\n";
    print_report(out_stream, report);
    return kExitOk;
  }
};

// ---- account ----

struct AccountCmd {
  AccountingFlags acc_flags;
  double sigma_x = 1.0, sigma_y = 1.0;
  std::string out;
  bool json_output = false;
  bool with_curve = false;

  void add_to(CLI::App* app) {
    acc_flags.add_to(app, /*with_n=*/true, /*with_l=*/true);
    app->add_option("--sigma-x", sigma_x, "Feature noise scale")->required();
    app->add_option("--sigma-y", sigma_y, "Label noise scale")->required();
    app->add_option("--out", out, "Write the JSON report here");
    app->add_flag("--json", json_output, "Print the JSON report instead of a summary");
    app->add_flag("--curve", with_curve, "Include the per-order curve in JSON output");
  }

  int run(std::ostream& out_stream) {
    const auto start = Clock::now();
    const acc::AccountingParams params = acc_flags.params(sigma_x, sigma_y);
    const acc::PrivacyReport report = acc::compose_and_convert(params);
    if (json_output) {
      out_stream << acc::to_json(report, with_curve).dump(2) << "\n";
    } else {
      print_report(out_stream, report);
    }
    if (!out.empty()) {
      io_detail::write_file_text(out, acc::to_json(report, with_curve).dump(2) + "\n");
      RunManifest m;
      m.command = "account";
      m.parameters = run_parameters(params);
      m.outputs.push_back(out);
      m.privacy_report = report_for_manifest(report);
      finish_manifest(m, start, out);
    }
    return kExitOk;
  }
};

// ---- calibrate ----

struct CalibrateCmd {
  AccountingFlags acc_flags;
  double target = 0.0;
  double ratio = 1.0;
  double sigma_lo = 1e-4, sigma_hi = 1e4;
  std::string out;
  bool json_output = false;

  void add_to(CLI::App* app) {
    app->add_option("--epsilon,--target-epsilon", target, "Target epsilon")->required();
    acc_flags.add_to(app, /*with_n=*/true, /*with_l=*/true);
    app->add_option("--ratio", ratio, "sigma_y / sigma_x")->capture_default_str();
    app->add_option("--sigma-min", sigma_lo, "Lower end of the search bracket")
        ->capture_default_str();
    app->add_option("--sigma-max", sigma_hi, "Upper end of the search bracket")
        ->capture_default_str();
    app->add_option("--out", out, "Write the JSON result here");
    app->add_flag("--json", json_output, "Print JSON instead of a summary");
  }

  int run(std::ostream& out_stream) {
    const auto start = Clock::now();
    acc::CalibrationRequest req;
    req.target_epsilon = target;
    req.ratio = ratio;
    req.sigma_lo = sigma_lo;
    req.sigma_hi = sigma_hi;
    req.params = acc_flags.params(1.0, ratio);
    const acc::CalibrationResult cal = acc::calibrate_noise(req);
    json result = {
        {"sigma_x", cal.sigma_x},
        {"sigma_y", cal.sigma_y},
        {"target_epsilon", target},
        {"iterations", cal.iterations},
        {"bracket_hit", cal.bracket_hit},
        {"report", report_for_manifest(cal.report)},
    };
    if (json_output) {
      out_stream << result.dump(2) << "\n";
    } else {
      out_stream << "sigma_x: " << fmt(cal.sigma_x) << "\n";
      out_stream << "sigma_y: " << fmt(cal.sigma_y) << "\n";
      if (cal.bracket_hit) {
        out_stream << "note: target met at the smallest sigma searched\n";
      }
      print_report(out_stream, cal.report);
    }
    if (!out.empty()) {
      io_detail::write_file_text(out, result.dump(2) + "\n");
      RunManifest m;
      m.command = "calibrate";
      m.parameters = run_parameters(cal.report.params);
      m.parameters["target_epsilon"] = target;
      m.parameters["ratio"] = ratio;
      m.outputs.push_back(out);
      m.privacy_report = report_for_manifest(cal.report);
      finish_manifest(m, start, out);
    }
    return kExitOk;
  }
};

// ---- sweep and compare ----

struct GridFlags {
  std::vector<std::uint32_t> l_values;
  std::vector<double> sigma_values;
  double sigma_min = 0.1, sigma_max = 10.0;
  int sigma_count = 9;
  double ratio = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--l-values", l_values, "Comma-separated l grid (default 1,2,4,...,512)")
        ->delimiter(',');
    app->add_option("--sigma-values", sigma_values, "Comma-separated sigma_x grid")
        ->delimiter(',');
    app->add_option("--sigma-min", sigma_min, "Smallest log-spaced sigma_x")->capture_default_str();
    app->add_option("--sigma-max", sigma_max, "Largest log-spaced sigma_x")->capture_default_str();
    app->add_option("--sigma-count", sigma_count, "Number of log-spaced sigma_x values")
        ->capture_default_str();
    app->add_option("--ratio", ratio, "sigma_y / sigma_x")->capture_default_str();
  }

  acc::SweepGrid grid() const {
    acc::SweepGrid g;
    g.l_values = l_values.empty() ? default_l_values() : l_values;
    g.sigma_values =
        sigma_values.empty() ? log_spaced(sigma_min, sigma_max, sigma_count) : sigma_values;
    g.ratio = ratio;
    return g;
  }
};

void validate_grid(const acc::SweepGrid& grid, const acc::AccountingParams& base) {
  for (std::uint32_t l : grid.l_values) {
    acc::AccountingParams p = base;
    p.l = l;
    for (double s : grid.sigma_values) {
      p.sigma_x = s;
      p.sigma_y = grid.ratio * s;
      p.validate();
    }
  }
}

struct SweepCmd {
  AccountingFlags acc_flags;
  GridFlags grid_flags;
  std::string out;
  unsigned threads = 1;

  void add_to(CLI::App* app) {
    acc_flags.n = 60000;
    app->add_option("--n", acc_flags.n, "Number of private records N")->capture_default_str();
    acc_flags.add_to(app, /*with_n=*/false, /*with_l=*/false);
    grid_flags.add_to(app);
    app->add_option("--out", out, "CSV output path (default: standard output)");
    app->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  }

  int run(std::ostream& out_stream) {
    const auto start = Clock::now();
    const acc::SweepGrid grid = grid_flags.grid();
    const acc::AccountingParams base = acc_flags.params(1.0, 1.0);
    validate_grid(grid, base);
    const std::vector<acc::SweepRow> rows = acc::sweep(grid, base, threads);
    const std::string csv = acc::sweep_csv(rows);
    const auto failures = std::count_if(rows.begin(), rows.end(), [](const acc::SweepRow& r) {
      return r.status.rfind("error", 0) == 0;
    });
    if (out.empty()) {
      out_stream << csv;
    } else {
      io_detail::write_file_text(out, csv);
      RunManifest m;
      m.command = "sweep";
      m.parameters = run_parameters(base);
      m.parameters.erase("l");
      m.parameters.erase("sigma_x");
      m.parameters.erase("sigma_y");
      m.parameters["l_values"] = grid.l_values;
      m.parameters["sigma_values"] = grid.sigma_values;
      m.parameters["ratio"] = grid.ratio;
      m.parameters["threads"] = threads;
      m.outputs.push_back(out);
      finish_manifest(m, start, out);
      out_stream << "wrote " << rows.size() << " rows to " << out << " (" << failures
                 << " failed)\n";
    }
    return failures == 0 ? kExitOk : kExitPrecision;
  }
};

struct CompareCmd {
  AccountingFlags acc_flags;
  GridFlags grid_flags;
  std::uint64_t d_x = 784, d_y = 10;
  std::string out;

  void add_to(CLI::App* app) {
    acc_flags.n = 60000;
    app->add_option("--n", acc_flags.n, "Number of private records N")->capture_default_str();
    acc_flags.add_to(app, /*with_n=*/false, /*with_l=*/false);
    grid_flags.sigma_values = {0.1, 0.3, 1.0};
    grid_flags.l_values = {2, 4, 8, 16, 32, 64, 128, 256, 512};
    grid_flags.add_to(app);
    app->add_option("--d-x", d_x, "Feature dimension for the baseline")->capture_default_str();
    app->add_option("--d-y", d_y, "Label dimension for the baseline")->capture_default_str();
    app->add_option("--out", out, "CSV output path");
  }

  int run(std::ostream& out_stream) {
    const auto start = Clock::now();
    const acc::SweepGrid grid = grid_flags.grid();
    const acc::AccountingParams base = acc_flags.params(1.0, 1.0);
    validate_grid(grid, base);
    std::string csv = "l,sigma_x,sigma_y,epsilon,baseline_epsilon\n";
    out_stream << "       l     sigma_x     sigma_y         epsilon        baseline\n";
    for (std::uint32_t l : grid.l_values) {
      for (double s : grid.sigma_values) {
        acc::AccountingParams p = base;
        p.l = l;
        p.sigma_x = s;
        p.sigma_y = grid.ratio * s;
        const double ours = acc::compose_and_convert(p).epsilon;
        const double theirs = acc::baseline_lee_epsilon(p, d_x, d_y).epsilon;
        csv += std::to_string(l) + ',' + fmt(p.sigma_x) + ',' + fmt(p.sigma_y) + ',' +
               fmt(ours) + ',' + fmt(theirs) + '\n';
        char line[128];
        std::snprintf(line, sizeof line, "%8u %11.4g %11.4g %15.6g %15.6g\n", l, p.sigma_x,
                      p.sigma_y, ours, theirs);
        out_stream << line;
      }
    }
    if (!out.empty()) {
      io_detail::write_file_text(out, csv);
      RunManifest m;
      m.command = "compare";
      m.parameters = run_parameters(base);
      m.parameters.erase("l");
      m.parameters.erase("sigma_x");
      m.parameters.erase("sigma_y");
      m.parameters["l_values"] = grid.l_values;
      m.parameters["sigma_values"] = grid.sigma_values;
      m.parameters["ratio"] = grid.ratio;
      m.parameters["d_x"] = d_x;
      m.parameters["d_y"] = d_y;
      m.outputs.push_back(out);
      finish_manifest(m, start, out);
    }
    return kExitOk;
  }
};

// ---- preview and verify ----

struct PreviewCmd {
  std::string input, out;
  PreviewGrid grid{4, 8, 28, 28, 0.0, 0.0};

  void add_to(CLI::App* app) {
    app->add_option("--input", input, "Synthetic container")->required();
    app->add_option("--out", out, "PGM/PPM output path")->required();
    app->add_option("--rows", grid.rows, "Grid rows")->capture_default_str();
    app->add_option("--cols", grid.cols, "Grid columns")->capture_default_str();
    app->add_option("--cell-height", grid.cell_height, "Image height")->capture_default_str();
    app->add_option("--cell-width", grid.cell_width, "Image width")->capture_default_str();
  }

  int run(std::ostream& out_stream) {
    const auto start = Clock::now();
    const fs::path beside = manifest_path_for(input);
    if (fs::exists(beside)) {
      const acc::PrivacyReport r = revalidate_manifest(read_manifest(beside));
      out_stream << "manifest verified: epsilon " << fmt(r.epsilon, 10) << "\n";
    }
    const SyntheticDataset ds = read_synthetic(input);
    render_preview_grid(ds, grid, out);
    RunManifest m;
    m.command = "preview";
    m.parameters = {{"rows", grid.rows},
                    {"cols", grid.cols},
                    {"cell_height", grid.cell_height},
                    {"cell_width", grid.cell_width},
                    {"pixel_min", grid.pixel_min},
                    {"pixel_max", grid.pixel_max}};
    m.inputs.push_back(input);
    m.outputs.push_back(out);
    finish_manifest(m, start, out);
    out_stream << "wrote " << grid.rows << "x" << grid.cols << " preview to " << out
               << " (range " << fmt(grid.pixel_min, 6) << " .. " << fmt(grid.pixel_max, 6)
               << ")\n";
    return kExitOk;
  }
};

struct VerifyCmd {
  std::string manifest;

  void add_to(CLI::App* app) {
    app->add_option("--manifest", manifest, "Manifest to re-validate")->required();
  }

  int run(std::ostream& out_stream) {
    const acc::PrivacyReport r = revalidate_manifest(read_manifest(manifest));
    out_stream << "ok: epsilon " << fmt(r.epsilon, 10) << " at alpha " << r.alpha_star << "\n";
    return kExitOk;
  }
};

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kPrecision: return kExitPrecision;
    case ErrorKind::kIo: return kExitIo;
    default: return kExitValidation;
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private class-centric data aggregation", "dpcda"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  SynthesizeCmd synthesize;
  AccountCmd account;
  CalibrateCmd calibrate;
  SweepCmd sweep_cmd;
  PreviewCmd preview;
  CompareCmd compare;
  VerifyCmd verify;

  struct Entry {
    CLI::App* app;
    std::function<int(std::ostream&)> run;
  };
  std::vector<Entry> entries;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.add_to(sub);
    entries.push_back({sub, [&cmd](std::ostream& o) { return cmd.run(o); }});
  };
  add("synthesize", "Generate a synthetic dataset", synthesize);
  add("account", "Privacy budget for fixed noise scales", account);
  add("calibrate", "Noise scale for a target epsilon", calibrate);
  add("sweep", "Epsilon over an (l, sigma) grid, as CSV", sweep_cmd);
  add("preview", "Render synthetic images to a PGM/PPM grid", preview);
  add("compare", "Epsilon against the dimension-dependent baseline", compare);
  add("verify", "Re-validate a run manifest", verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitValidation;
  }

  try {
    for (const Entry& e : entries) {
      if (e.app->parsed()) return e.run(out);
    }
    err << app.help();
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace dpcda::cli
