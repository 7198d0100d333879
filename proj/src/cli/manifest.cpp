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

#include "dpcda/manifest.hpp"

#include <cmath>
#include <string>

#include "dataset_io/file_util.hpp"
#include "dpcda/error.hpp"

#ifndef DPCDA_VERSION
#define DPCDA_VERSION "0.0.0"
#endif

namespace dpcda {
namespace {

bool same_number(double a, double b) {
  return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string_view tool_version() noexcept { return DPCDA_VERSION; }

nlohmann::json to_json(const RunManifest& manifest) {
  nlohmann::json j = {
      {"command", manifest.command},
      {"parameters", manifest.parameters},
      {"inputs", manifest.inputs},
      {"outputs", manifest.outputs},
      {"tool_version", manifest.tool_version},
      {"duration_seconds", manifest.duration_seconds},
  };
  if (manifest.privacy_report) j["privacy_report"] = *manifest.privacy_report;
  return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.parameters = j.value("parameters", nlohmann::json::object());
    m.inputs = j.value("inputs", std::vector<std::string>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.tool_version = j.value("tool_version", std::string());
    m.duration_seconds = j.value("duration_seconds", 0.0);
    if (j.contains("privacy_report")) m.privacy_report = j.at("privacy_report");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("manifest: ") + e.what());
  }
  return m;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  io_detail::write_file_text(path, to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = io_detail::read_file_bytes(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

accountant::PrivacyReport revalidate_manifest(const RunManifest& manifest) {
  if (!manifest.privacy_report) {
    throw Error(ErrorKind::kConsistency, "manifest has no privacy report");
  }
  const nlohmann::json& stored = *manifest.privacy_report;
  if (!stored.contains("params")) {
    throw Error(ErrorKind::kConsistency, "privacy report has no parameters");
  }
  const accountant::AccountingParams params = accountant::params_from_json(stored["params"]);

  for (const char* key : {"n", "t", "l", "c", "sigma_x", "sigma_y", "delta"}) {
    if (!manifest.parameters.contains(key)) continue;
    const auto& run = manifest.parameters[key];
    const auto& rep = stored["params"].value(key, nlohmann::json());
    if (!run.is_number() || !rep.is_number() ||
        !same_number(run.get<double>(), rep.get<double>())) {
      throw Error(ErrorKind::kConsistency,
                  std::string("manifest parameter '") + key + "' differs from its report");
    }
  }

  const accountant::PrivacyReport fresh = accountant::compose_and_convert(params);
  const nlohmann::json& eps = stored.value("epsilon", nlohmann::json());
  const bool stored_finite = eps.is_number();
  const bool fresh_finite = std::isfinite(fresh.epsilon);
  bool ok = stored_finite == fresh_finite;
  if (ok && fresh_finite) {
    const double e = eps.get<double>();
    ok = std::abs(e - fresh.epsilon) <= 1e-9 * std::abs(fresh.epsilon) &&
         stored.value("alpha_star", 0u) == fresh.alpha_star;
  }
  if (!ok) {
    throw Error(ErrorKind::kConsistency,
                "stored privacy report does not match a fresh computation (epsilon " +
                    (stored_finite ? std::to_string(eps.get<double>()) : std::string("inf")) +
                    " vs " + std::to_string(fresh.epsilon) + ")");
  }
  return fresh;
}

}  // namespace dpcda
