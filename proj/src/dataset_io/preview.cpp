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
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"
#include "file_util.hpp"

namespace dpcda {

void render_preview_grid(const SyntheticDataset& ds, PreviewGrid& grid,
                         const std::filesystem::path& out) {
  if (grid.rows == 0 || grid.cols == 0 || grid.cell_height == 0 ||
      grid.cell_width == 0) {
    throw Error(ErrorKind::kDimension, "preview grid dimensions must be positive");
  }
  const std::size_t cells = grid.rows * grid.cols;
  if (cells > ds.size()) {
    throw Error(ErrorKind::kDimension,
                "preview grid needs " + std::to_string(cells) + " samples, dataset has " +
                    std::to_string(ds.size()));
  }
  const std::size_t plane = grid.cell_height * grid.cell_width;
  std::size_t channels = 0;
  if (ds.dim() == plane) {
    channels = 1;
  } else if (ds.dim() == 3 * plane) {
    channels = 3;
  } else {
    throw Error(ErrorKind::kDimension,
                "feature dimension " + std::to_string(ds.dim()) + " matches neither " +
                    std::to_string(grid.cell_height) + "x" +
                    std::to_string(grid.cell_width) + " grayscale nor RGB");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 0; s < cells; ++s) {
    for (double v : ds.features.row(s)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  grid.pixel_min = lo;
  grid.pixel_max = hi;
  const double range = hi - lo;
  auto to_byte = [&](double v) -> std::uint8_t {
    if (!(range > 0.0)) return 0;
    const double scaled = std::round((v - lo) / range * 255.0);
    return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
  };

  const std::size_t width = grid.cols * grid.cell_width;
  const std::size_t height = grid.rows * grid.cell_height;
  const std::string header = std::string(channels == 1 ? "P5\n" : "P6\n") +
                             std::to_string(width) + " " + std::to_string(height) +
                             "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  const std::size_t body = bytes.size();
  bytes.resize(body + width * height * channels, 0);

  for (std::size_t s = 0; s < cells; ++s) {
    const std::size_t gr = s / grid.cols;
    const std::size_t gc = s % grid.cols;
    std::span<const double> sample = ds.features.row(s);
    for (std::size_t y = 0; y < grid.cell_height; ++y) {
      for (std::size_t x = 0; x < grid.cell_width; ++x) {
        const std::size_t py = gr * grid.cell_height + y;
        const std::size_t px = gc * grid.cell_width + x;
        for (std::size_t ch = 0; ch < channels; ++ch) {
          bytes[body + (py * width + px) * channels + ch] =
              to_byte(sample[ch * plane + y * grid.cell_width + x]);
        }
      }
    }
  }
  io_detail::write_file_bytes(out, bytes);
}

}  // namespace dpcda
