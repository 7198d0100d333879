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

#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>

#include <unistd.h>

namespace dpcda::testing {

std::filesystem::path data_dir() { return DPCDA_TEST_DATA_DIR; }

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

const nlohmann::json& oracle_cases() {
  static const nlohmann::json j = load_json(data_dir() / "rdp_oracle_cases.json");
  return j;
}

const nlohmann::json& fixture_expectations() {
  static const nlohmann::json j = load_json(data_dir() / "fixtures" / "expected.json");
  return j;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("dpcda-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Dataset toy_dataset(const std::vector<std::size_t>& class_sizes, std::size_t d,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  std::size_t n = 0;
  for (std::size_t s : class_sizes) n += s;
  Dataset ds;
  ds.features = Matrix(n, d);
  ds.class_count = static_cast<std::uint32_t>(class_sizes.size());
  ds.source_name = "toy";
  std::size_t row = 0;
  for (std::size_t k = 0; k < class_sizes.size(); ++k) {
    ds.original_labels.push_back(static_cast<std::int64_t>(k));
    for (std::size_t i = 0; i < class_sizes[k]; ++i, ++row) {
      for (std::size_t j = 0; j < d; ++j) {
        const double centre = static_cast<double>(k + 1) * (j % 2 == 0 ? 1.0 : -1.0) *
                              static_cast<double>(j / 2 + 1);
        ds.features(row, j) = centre + jitter(rng);
      }
      ds.labels.push_back(static_cast<std::uint32_t>(k + 1));
    }
  }
  return ds;
}

double relative_error(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace dpcda::testing
