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

// Loaders for IDX, CIFAR-10 binary and CSV inputs, the synthetic-dataset
// container, and PGM/PPM preview grids.
//
// Container layout (all integers little-endian):
//
//   offset  size  field
//        0     4  magic "DPCD"
//        4     2  version = 1
//        6     2  reserved = 0
//        8     8  sample count T'
//       16     8  feature dimension d_x
//       24     4  class count K
//       28     4  reserved = 0
//       32  4T'd  features, float32, row-major
//        .    T'  labels, u8, values 1..K
//        .     4  metadata length L
//        .     L  metadata, UTF-8 JSON

#ifndef DPCDA_DATASET_IO_HPP_
#define DPCDA_DATASET_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dpcda/matrix.hpp"
#include "json.hpp"

namespace dpcda {

// Raw input data. Labels are contiguous class ids 1..class_count;
// original_labels[k - 1] holds the source value that became class k.
struct Dataset {
  Matrix features;
  std::vector<std::uint32_t> labels;
  std::uint32_t class_count = 0;
  std::vector<std::int64_t> original_labels;
  std::string source_name;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dim() const noexcept { return features.cols(); }

  // Throws kConsistency / kValue when an invariant is broken. Loaders may
  // return K = 1 for single-class fixtures; synthesis insists on K >= 2.
  void validate() const;
};

struct SyntheticDataset {
  Matrix features;
  std::vector<std::uint32_t> labels;
  std::uint32_t class_count = 0;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dim() const noexcept { return features.cols(); }
};

struct PreviewGrid {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t cell_height = 28;
  std::size_t cell_width = 28;
  // Filled by render_preview_grid with the global min/max used for scaling.
  double pixel_min = 0.0;
  double pixel_max = 0.0;
};

enum class SyntheticFormat { kContainer, kCsv };

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::size_t kCifarRecordBytes = 3073;
inline constexpr std::size_t kCifarPixels = 3072;
inline constexpr std::size_t kContainerHeaderBytes = 32;
inline constexpr std::uint16_t kContainerVersion = 1;

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

// Reads data_batch_1.bin .. data_batch_5.bin from `directory`, skipping
// missing ones; at least one must be present.
Dataset load_cifar10(const std::filesystem::path& directory);

// Reads the given CIFAR-10 binary batch files in order.
Dataset load_cifar10_batches(const std::vector<std::filesystem::path>& files);

// Column selected by header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

Dataset load_csv(const std::filesystem::path& path, const ColumnRef& label_column);

void write_synthetic(const SyntheticDataset& ds, const std::filesystem::path& path,
                     SyntheticFormat format = SyntheticFormat::kContainer);

// Serialized container bytes; write_synthetic(kContainer) writes exactly these.
std::vector<std::uint8_t> encode_container(const SyntheticDataset& ds);

SyntheticDataset read_synthetic(const std::filesystem::path& path);

SyntheticDataset decode_container(const std::vector<std::uint8_t>& bytes);

// Writes P5 (d_x = h*w) or P6 (d_x = 3*h*w, channel-planar) with maxval 255.
// Updates grid.pixel_min / grid.pixel_max.
void render_preview_grid(const SyntheticDataset& ds, PreviewGrid& grid,
                         const std::filesystem::path& out);

}  // namespace dpcda

#endif  // DPCDA_DATASET_IO_HPP_
