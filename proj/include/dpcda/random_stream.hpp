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

#ifndef DPCDA_RANDOM_STREAM_HPP_
#define DPCDA_RANDOM_STREAM_HPP_

#include <cstdint>
#include <span>

namespace dpcda {

// Counter-based random stream. Output n is mix64(key + (n + 1) * gamma),
// the SplitMix64 finalizer applied to a Weyl sequence, so every stream is
// fully determined by its 64-bit key and independent of any other stream's
// consumption.
//
// Gaussians use the Box-Muller transform on two uniforms:
//   u1 = (bits53(a) + 1) * 2^-53  in (0, 1]
//   u2 = bits53(b) * 2^-53        in [0, 1)
//   z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2)
// with z0 returned first and z1 cached for the next call.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) noexcept : key_(key) {}

  // Key for synthetic sample `sample_index` of class `class_id` under `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t class_id,
                             std::uint64_t sample_index) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double next_uniform() noexcept;

  // Uniform integer in [0, bound); bound must be positive. Lemire's
  // multiply-shift with rejection, so the result is exactly uniform.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  double next_gaussian() noexcept;

  void fill_gaussian(std::span<double> out) noexcept {
    for (double& v : out) v = next_gaussian();
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace dpcda

#endif  // DPCDA_RANDOM_STREAM_HPP_
