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

#include "file_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"

namespace dpcda {
namespace io_detail {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorKind::kIo, "read failed: " + path.string());
  }
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot open for writing: " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorKind::kIo, "write failed: " + path.string());
  }
}

void write_file_text(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()),
                          text.size()});
}

void assign_sorted_class_ids(std::span<const std::int64_t> raw,
                             std::vector<std::uint32_t>& labels,
                             std::vector<std::int64_t>& original) {
  original.assign(raw.begin(), raw.end());
  std::sort(original.begin(), original.end());
  original.erase(std::unique(original.begin(), original.end()), original.end());
  labels.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto it = std::lower_bound(original.begin(), original.end(), raw[i]);
    labels[i] = static_cast<std::uint32_t>(it - original.begin()) + 1;
  }
}

}  // namespace io_detail

void Dataset::validate() const {
  if (features.rows() == 0) {
    throw Error(ErrorKind::kConsistency, "dataset has no rows");
  }
  if (features.cols() == 0) {
    throw Error(ErrorKind::kConsistency, "dataset has no feature columns");
  }
  if (labels.size() != features.rows()) {
    throw Error(ErrorKind::kConsistency,
                "label count " + std::to_string(labels.size()) +
                    " does not match row count " +
                    std::to_string(features.rows()));
  }
  if (class_count == 0) {
    throw Error(ErrorKind::kConsistency, "class count must be positive");
  }
  std::vector<std::size_t> seen(class_count, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > class_count) {
      throw Error(ErrorKind::kValue, "row " + std::to_string(i) + " has label " +
                                         std::to_string(labels[i]) +
                                         " outside 1.." +
                                         std::to_string(class_count));
    }
    ++seen[labels[i] - 1];
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (seen[k] == 0) {
      throw Error(ErrorKind::kConsistency,
                  "class " + std::to_string(k + 1) + " has no rows");
    }
  }
  for (double v : features.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kValue, "dataset contains a non-finite feature");
    }
  }
}

}  // namespace dpcda
