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
#include <sstream>
#include <string>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"
#include "file_util.hpp"

namespace dpcda {
namespace {

std::string hex32(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(8);
  os.fill('0');
  os << v;
  return os.str();
}

void check_magic(std::uint32_t got, std::uint32_t want,
                 const std::filesystem::path& path) {
  if (got != want) {
    throw Error(ErrorKind::kFormat, path.string() + ": bad IDX magic " +
                                        hex32(got) + ", expected " + hex32(want));
  }
}

void check_length(std::size_t got, std::uint64_t want,
                  const std::filesystem::path& path) {
  if (got != want) {
    throw Error(ErrorKind::kLength,
                path.string() + ": expected " + std::to_string(want) +
                    " bytes, found " + std::to_string(got));
  }
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
  const std::vector<std::uint8_t> images = io_detail::read_file_bytes(images_path);
  const std::vector<std::uint8_t> labels = io_detail::read_file_bytes(labels_path);

  if (images.size() < 16) check_length(images.size(), 16, images_path);
  check_magic(io_detail::load_be32(images.data()), kIdxImageMagic, images_path);
  const std::uint64_t count = io_detail::load_be32(images.data() + 4);
  const std::uint64_t rows = io_detail::load_be32(images.data() + 8);
  const std::uint64_t cols = io_detail::load_be32(images.data() + 12);
  const std::uint64_t dim = rows * cols;
  check_length(images.size(), 16 + count * dim, images_path);

  if (labels.size() < 8) check_length(labels.size(), 8, labels_path);
  check_magic(io_detail::load_be32(labels.data()), kIdxLabelMagic, labels_path);
  const std::uint64_t label_count = io_detail::load_be32(labels.data() + 4);
  check_length(labels.size(), 8 + label_count, labels_path);

  if (label_count != count) {
    throw Error(ErrorKind::kConsistency,
                "IDX image count " + std::to_string(count) +
                    " does not match label count " + std::to_string(label_count));
  }
  if (count == 0 || dim == 0) {
    throw Error(ErrorKind::kConsistency, images_path.string() + ": no images");
  }

  Dataset ds;
  ds.features = Matrix(count, dim);
  const std::uint8_t* pixels = images.data() + 16;
  std::span<double> out = ds.features.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pixels[i];

  std::vector<std::int64_t> raw(labels.begin() + 8, labels.end());
  io_detail::assign_sorted_class_ids(raw, ds.labels, ds.original_labels);
  ds.class_count = static_cast<std::uint32_t>(ds.original_labels.size());
  ds.source_name = images_path.filename().string();
  ds.validate();
  return ds;
}

}  // namespace dpcda
