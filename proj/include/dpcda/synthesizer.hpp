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

// Class-centric mixing: every synthetic sample of class k is the mean of l
// distinct rows of class k plus N(0, sigma_x^2 I) noise, labelled by the
// argmax of the mean one-hot vector plus N(0, sigma_y^2 I) noise.
//
// Class k receives floor(T/K) samples, plus one more when k <= T mod K.
// Output is class-major. Sample t of class k draws all of its randomness from
// RandomStream::derive(seed, k, t), so the result does not depend on how the
// work is split across threads.

#ifndef DPCDA_SYNTHESIZER_HPP_
#define DPCDA_SYNTHESIZER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dpcda/dataset_io.hpp"
#include "dpcda/matrix.hpp"
#include "dpcda/preprocess.hpp"
#include "dpcda/random_stream.hpp"
#include "json.hpp"

namespace dpcda {

struct SynthesisConfig {
  std::uint32_t l = 1;
  std::uint64_t t = 1;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  ClipParam clip;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const SynthesisConfig& cfg);

struct ClassIndex {
  std::vector<std::vector<std::size_t>> members;  // members[k - 1]

  std::size_t class_count() const noexcept { return members.size(); }
  std::size_t min_count() const noexcept;
};

ClassIndex partition_by_class(std::span<const std::uint32_t> labels,
                              std::uint32_t class_count);

// l distinct entries of `class_list`, uniformly over all size-l subsets, via
// a partial Fisher-Yates shuffle with a sparse swap table (O(l) per call).
std::vector<std::size_t> sample_indices(std::span<const std::size_t> class_list,
                                        std::uint32_t l, RandomStream& stream);

struct MixedSample {
  std::vector<double> features;
  std::vector<double> label_scores;
  std::uint32_t label = 0;  // 1..K
};

// Averages rows `picks` of `features` and `onehots` and adds the noise. Draws
// the feature noise first, then the label noise; a zero sigma draws nothing.
MixedSample synthesize_sample(const Matrix& features, const Matrix& onehots,
                              std::span<const std::size_t> picks, double sigma_x,
                              double sigma_y, RandomStream& stream);

// Per-class sample counts, indexed by class id - 1.
std::vector<std::uint64_t> class_sample_counts(std::uint64_t t, std::uint32_t class_count);

// `ds` must already be preprocessed. `threads` = 0 uses hardware concurrency.
SyntheticDataset synthesize_dataset(const Dataset& ds, const SynthesisConfig& cfg,
                                    unsigned threads = 1);

}  // namespace dpcda

#endif  // DPCDA_SYNTHESIZER_HPP_
