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

#ifndef DPCDA_TESTS_SUPPORT_FIXTURES_HPP_
#define DPCDA_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "json.hpp"

namespace dpcda::testing {

std::filesystem::path data_dir();
nlohmann::json load_json(const std::filesystem::path& path);
const nlohmann::json& oracle_cases();
const nlohmann::json& fixture_expectations();

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Classes of the given sizes in d dimensions; class k is centred at
// (k, -k, 2k, ...) with uniform jitter in [-0.5, 0.5).
Dataset toy_dataset(const std::vector<std::size_t>& class_sizes, std::size_t d,
                    std::uint64_t seed);

double relative_error(double got, double want);

}  // namespace dpcda::testing

#endif  // DPCDA_TESTS_SUPPORT_FIXTURES_HPP_
