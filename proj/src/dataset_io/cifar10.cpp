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

#include <cstdint>
#include <string>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"
#include "file_util.hpp"

namespace dpcda {

Dataset load_cifar10_batches(const std::vector<std::filesystem::path>& files) {
  if (files.empty()) {
    throw Error(ErrorKind::kIo, "no CIFAR-10 batch files given");
  }
  std::vector<std::vector<std::uint8_t>> batches;
  std::size_t records = 0;
  for (const auto& file : files) {
    batches.push_back(io_detail::read_file_bytes(file));
    const std::size_t size = batches.back().size();
    if (size == 0 || size % kCifarRecordBytes != 0) {
      throw Error(ErrorKind::kFormat,
                  file.string() + ": size " + std::to_string(size) +
                      " is not a positive multiple of " +
                      std::to_string(kCifarRecordBytes));
    }
    records += size / kCifarRecordBytes;
  }

  Dataset ds;
  ds.features = Matrix(records, kCifarPixels);
  std::vector<std::int64_t> raw(records);
  std::size_t row = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const std::vector<std::uint8_t>& bytes = batches[b];
    for (std::size_t off = 0; off < bytes.size(); off += kCifarRecordBytes, ++row) {
      const std::uint8_t label = bytes[off];
      if (label > 9) {
        throw Error(ErrorKind::kValue,
                    files[b].string() + ": record " +
                        std::to_string(off / kCifarRecordBytes) + " has label byte " +
                        std::to_string(label) + " > 9");
      }
      raw[row] = label;
      std::span<double> dst = ds.features.row(row);
      for (std::size_t j = 0; j < kCifarPixels; ++j) dst[j] = bytes[off + 1 + j];
    }
  }
  io_detail::assign_sorted_class_ids(raw, ds.labels, ds.original_labels);
  ds.class_count = static_cast<std::uint32_t>(ds.original_labels.size());
  ds.source_name = files.front().parent_path().filename().string();
  if (ds.source_name.empty()) ds.source_name = "cifar10";
  ds.validate();
  return ds;
}

Dataset load_cifar10(const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> files;
  for (int i = 1; i <= 5; ++i) {
    auto file = directory / ("data_batch_" + std::to_string(i) + ".bin");
    if (std::filesystem::exists(file)) files.push_back(std::move(file));
  }
  if (files.empty()) {
    throw Error(ErrorKind::kIo,
                directory.string() + ": no data_batch_N.bin files found");
  }
  return load_cifar10_batches(files);
}

}  // namespace dpcda
