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
#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"

namespace dpcda {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void parse_failure(std::size_t row, std::size_t col,
                                std::string_view header, std::string_view cell) {
  throw Error(ErrorKind::kParse,
              "row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                  " ('" + std::string(header) + "'): cannot parse '" +
                  std::string(cell) + "'");
}

}  // namespace

// Row numbers in messages count data rows from 1; the header is not counted.
Dataset load_csv(const std::filesystem::path& path, const ColumnRef& label_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kFormat, path.string() + ": missing header row");
  }
  const std::string header_line = line;
  const std::vector<std::string_view> header = split_fields(header_line);

  std::size_t label_index = 0;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == *name) {
        label_index = i;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::kFormat,
                  path.string() + ": no column named '" + *name + "'");
    }
  } else {
    label_index = std::get<std::size_t>(label_column);
    if (label_index >= header.size()) {
      throw Error(ErrorKind::kFormat, path.string() + ": label column index " +
                                          std::to_string(label_index) +
                                          " out of range");
    }
  }
  if (header.size() < 2) {
    throw Error(ErrorKind::kFormat, path.string() + ": need at least one feature column");
  }

  const std::size_t dim = header.size() - 1;
  std::vector<double> values;
  std::vector<std::uint32_t> labels;
  std::vector<std::int64_t> original;
  std::unordered_map<std::int64_t, std::uint32_t> class_of;

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::kFormat,
                  path.string() + ": row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    for (std::size_t col = 0; col < fields.size(); ++col) {
      const std::string_view cell = fields[col];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (col == label_index) {
        std::int64_t raw = 0;
        const auto [ptr, ec] = std::from_chars(first, last, raw);
        if (cell.empty() || ec != std::errc() || ptr != last) {
          parse_failure(row, col, header[col], cell);
        }
        auto [it, inserted] =
            class_of.emplace(raw, static_cast<std::uint32_t>(original.size() + 1));
        if (inserted) original.push_back(raw);
        labels.push_back(it->second);
      } else {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (cell.empty() || ec != std::errc() || ptr != last) {
          parse_failure(row, col, header[col], cell);
        }
        values.push_back(v);
      }
    }
  }
  if (row == 0) {
    throw Error(ErrorKind::kConsistency, path.string() + ": no data rows");
  }

  Dataset ds;
  ds.features = Matrix(row, dim);
  std::copy(values.begin(), values.end(), ds.features.values().begin());
  ds.labels = std::move(labels);
  ds.original_labels = std::move(original);
  ds.class_count = static_cast<std::uint32_t>(ds.original_labels.size());
  ds.source_name = path.filename().string();
  ds.validate();
  return ds;
}

}  // namespace dpcda
