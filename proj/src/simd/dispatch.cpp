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

#include <cstdlib>
#include <string_view>

#include "dpcda/simd/kernels.hpp"

namespace dpcda::simd {

#if defined(DPCDA_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table() noexcept;
}  // namespace detail
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(DPCDA_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select_kernels() noexcept {
  const char* env = std::getenv("DPCDA_SIMD");
  const std::string_view requested = env != nullptr ? env : "";
  if (requested == "scalar") return scalar_kernels();
  if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace dpcda::simd
