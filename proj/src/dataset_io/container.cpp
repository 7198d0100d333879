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
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/error.hpp"
#include "file_util.hpp"

namespace dpcda {
namespace {

constexpr char kMagic[4] = {'D', 'P', 'C', 'D'};

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { bytes_.reserve(reserve); }

  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

std::uint64_t load_le(const std::uint8_t* p, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw Error(ErrorKind::kLength, "container dimensions overflow");
  }
  return a * b;
}

void validate_for_write(const SyntheticDataset& ds) {
  if (ds.size() == 0) throw Error(ErrorKind::kValue, "synthetic dataset is empty");
  if (ds.labels.size() != ds.size()) {
    throw Error(ErrorKind::kConsistency, "label count does not match sample count");
  }
  if (ds.class_count < 1 || ds.class_count > 255) {
    throw Error(ErrorKind::kValue, "container supports 1..255 classes, got " +
                                       std::to_string(ds.class_count));
  }
  for (std::uint32_t y : ds.labels) {
    if (y < 1 || y > ds.class_count) {
      throw Error(ErrorKind::kValue, "label " + std::to_string(y) + " outside 1.." +
                                         std::to_string(ds.class_count));
    }
  }
}

}  // namespace

std::vector<std::uint8_t> encode_container(const SyntheticDataset& ds) {
  validate_for_write(ds);
  const std::string meta = ds.metadata.dump();
  if (meta.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::kLength, "metadata blob too large");
  }
  const std::size_t payload = ds.size() * ds.dim() * 4 + ds.size();
  ByteWriter w(kContainerHeaderBytes + payload + 4 + meta.size());
  w.raw(kMagic, 4);
  w.u16(kContainerVersion);
  w.u16(0);
  w.u64(ds.size());
  w.u64(ds.dim());
  w.u32(ds.class_count);
  w.u32(0);
  for (double v : ds.features.values()) w.f32(static_cast<float>(v));
  for (std::uint32_t y : ds.labels) w.u8(static_cast<std::uint8_t>(y));
  w.u32(static_cast<std::uint32_t>(meta.size()));
  w.raw(meta.data(), meta.size());
  return w.take();
}

SyntheticDataset decode_container(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kContainerHeaderBytes) {
    throw Error(ErrorKind::kLength, "container header: expected " +
                                        std::to_string(kContainerHeaderBytes) +
                                        " bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(ErrorKind::kFormat, "container: bad magic");
  }
  const auto version = static_cast<std::uint16_t>(load_le(bytes.data() + 4, 2));
  if (version != kContainerVersion) {
    throw Error(ErrorKind::kFormat,
                "container: unsupported version " + std::to_string(version));
  }
  const std::uint64_t count = load_le(bytes.data() + 8, 8);
  const std::uint64_t dim = load_le(bytes.data() + 16, 8);
  const auto classes = static_cast<std::uint32_t>(load_le(bytes.data() + 24, 4));

  const std::uint64_t payload = checked_mul(checked_mul(count, dim), 4) + count;
  const std::uint64_t meta_offset = kContainerHeaderBytes + payload;
  if (bytes.size() < meta_offset + 4) {
    throw Error(ErrorKind::kLength,
                "container payload: expected at least " +
                    std::to_string(meta_offset + 4) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  const std::uint64_t meta_len = load_le(bytes.data() + meta_offset, 4);
  const std::uint64_t expected = meta_offset + 4 + meta_len;
  if (bytes.size() != expected) {
    throw Error(ErrorKind::kLength, "container: expected " + std::to_string(expected) +
                                        " bytes, got " + std::to_string(bytes.size()));
  }

  SyntheticDataset ds;
  ds.class_count = classes;
  ds.features = Matrix(count, dim);
  const std::uint8_t* p = bytes.data() + kContainerHeaderBytes;
  for (double& v : ds.features.values()) {
    v = std::bit_cast<float>(static_cast<std::uint32_t>(load_le(p, 4)));
    p += 4;
  }
  ds.labels.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ds.labels[i] = p[i];
    if (ds.labels[i] < 1 || ds.labels[i] > classes) {
      throw Error(ErrorKind::kFormat, "container: label " + std::to_string(ds.labels[i]) +
                                          " outside 1.." + std::to_string(classes));
    }
  }
  const auto* meta = reinterpret_cast<const char*>(bytes.data() + meta_offset + 4);
  ds.metadata = nlohmann::json::parse(meta, meta + meta_len, nullptr, false);
  if (ds.metadata.is_discarded()) {
    throw Error(ErrorKind::kFormat, "container: metadata is not valid JSON");
  }
  return ds;
}

void write_synthetic(const SyntheticDataset& ds, const std::filesystem::path& path,
                     SyntheticFormat format) {
  if (format == SyntheticFormat::kContainer) {
    io_detail::write_file_bytes(path, encode_container(ds));
    return;
  }
  validate_for_write(ds);
  std::string text;
  for (std::size_t j = 0; j < ds.dim(); ++j) text += "x" + std::to_string(j + 1) + ",";
  text += "label\n";
  char buf[32];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features.row(i)) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      text.append(buf, res.ptr);
      text += ',';
    }
    text += std::to_string(ds.labels[i]);
    text += '\n';
  }
  io_detail::write_file_text(path, text);
}

SyntheticDataset read_synthetic(const std::filesystem::path& path) {
  try {
    return decode_container(io_detail::read_file_bytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace dpcda
