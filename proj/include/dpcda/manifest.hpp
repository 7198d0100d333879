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

// Run manifests: a JSON record written beside every CLI output.

#ifndef DPCDA_MANIFEST_HPP_
#define DPCDA_MANIFEST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dpcda/accountant.hpp"
#include "json.hpp"

namespace dpcda {

std::string_view tool_version() noexcept;

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string tool_version;
  double duration_seconds = 0.0;
  // Report without the per-order curve.
  std::optional<nlohmann::json> privacy_report;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

// "<output>.manifest.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

// Recomputes the embedded report from its own parameters and checks that
// epsilon and alpha* agree, and that the report's (N, T, l, c, sigma_x,
// sigma_y, delta) match the run parameters. Throws kConsistency otherwise.
accountant::PrivacyReport revalidate_manifest(const RunManifest& manifest);

}  // namespace dpcda

#endif  // DPCDA_MANIFEST_HPP_
