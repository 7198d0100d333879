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

#ifndef DPCDA_SRC_DATASET_IO_FILE_UTIL_HPP_
#define DPCDA_SRC_DATASET_IO_FILE_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dpcda::io_detail {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

void write_file_text(const std::filesystem::path& path, const std::string& text);

inline std::uint32_t load_be32(const std::uint8_t* p) noexcept {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

// Maps the distinct raw values, sorted ascending, onto 1..K.
void assign_sorted_class_ids(std::span<const std::int64_t> raw,
                             std::vector<std::uint32_t>& labels,
                             std::vector<std::int64_t>& original);

}  // namespace dpcda::io_detail

#endif  // DPCDA_SRC_DATASET_IO_FILE_UTIL_HPP_
