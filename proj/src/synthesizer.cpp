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

#include "dpcda/synthesizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>

#include "dpcda/error.hpp"
#include "dpcda/simd/kernels.hpp"

namespace dpcda {
namespace {

// Reusable per-worker buffers.
struct Scratch {
  std::vector<double> noise;
  std::vector<double> scores;
  std::vector<std::size_t> dense;
  std::unordered_map<std::size_t, std::size_t> swaps;
};

void sample_into(std::span<const std::size_t> class_list, std::uint32_t l,
                 RandomStream& stream, Scratch& scratch, std::vector<std::size_t>& out) {
  const std::size_t n = class_list.size();
  if (l > n) {
    throw Error(ErrorKind::kInsufficientClassSize,
                "insufficient class size: need " + std::to_string(l) +
                    " rows, class has " + std::to_string(n));
  }
  out.resize(l);
  if (n <= 4 * static_cast<std::size_t>(l)) {
    scratch.dense.assign(class_list.begin(), class_list.end());
    for (std::size_t i = 0; i < l; ++i) {
      const std::size_t j = i + stream.uniform_below(n - i);
      std::swap(scratch.dense[i], scratch.dense[j]);
      out[i] = scratch.dense[i];
    }
    return;
  }
  // Same swap sequence over a virtual identity array.
  auto& swaps = scratch.swaps;
  swaps.clear();
  auto at = [&](std::size_t pos) {
    const auto it = swaps.find(pos);
    return it == swaps.end() ? pos : it->second;
  };
  for (std::size_t i = 0; i < l; ++i) {
    const std::size_t j = i + stream.uniform_below(n - i);
    const std::size_t vi = at(i);
    const std::size_t vj = at(j);
    swaps[i] = vj;
    swaps[j] = vi;
    out[i] = class_list[vj];
  }
}

std::uint32_t argmax_label(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<std::uint32_t>(best + 1);
}

std::uint32_t mix_into(const Matrix& features, const Matrix& onehots,
                       std::span<const std::size_t> picks, double sigma_x, double sigma_y,
                       RandomStream& stream, std::span<double> out_features,
                       Scratch& scratch) {
  const simd::KernelTable& k = simd::active_kernels();
  const auto count = static_cast<double>(picks.size());

  std::fill(out_features.begin(), out_features.end(), 0.0);
  for (std::size_t idx : picks) k.add_inplace(out_features, features.row(idx));
  scratch.noise.assign(out_features.size(), 0.0);
  if (sigma_x != 0.0) stream.fill_gaussian(scratch.noise);
  k.mix_finish(out_features, count, scratch.noise, sigma_x);

  scratch.scores.assign(onehots.cols(), 0.0);
  for (std::size_t idx : picks) k.add_inplace(scratch.scores, onehots.row(idx));
  scratch.noise.assign(onehots.cols(), 0.0);
  if (sigma_y != 0.0) stream.fill_gaussian(scratch.noise);
  k.mix_finish(scratch.scores, count, scratch.noise, sigma_y);
  return argmax_label(scratch.scores);
}

}  // namespace

void SynthesisConfig::validate() const {
  if (l < 1) throw Error(ErrorKind::kConfiguration, "l must be at least 1");
  if (t < 1) throw Error(ErrorKind::kConfiguration, "T must be at least 1");
  if (!(sigma_x >= 0.0) || !std::isfinite(sigma_x)) {
    throw Error(ErrorKind::kConfiguration, "sigma_x must be finite and >= 0");
  }
  if (!(sigma_y >= 0.0) || !std::isfinite(sigma_y)) {
    throw Error(ErrorKind::kConfiguration, "sigma_y must be finite and >= 0");
  }
  if (!(clip.c > 0.0) || !std::isfinite(clip.c)) {
    throw Error(ErrorKind::kConfiguration, "c must be finite and > 0");
  }
}

nlohmann::json to_json(const SynthesisConfig& cfg) {
  return {{"l", cfg.l},         {"t", cfg.t},           {"sigma_x", cfg.sigma_x},
          {"sigma_y", cfg.sigma_y}, {"c", cfg.clip.c}, {"seed", cfg.seed}};
}

std::size_t ClassIndex::min_count() const noexcept {
  std::size_t best = members.empty() ? 0 : members.front().size();
  for (const auto& m : members) best = std::min(best, m.size());
  return best;
}

ClassIndex partition_by_class(std::span<const std::uint32_t> labels,
                              std::uint32_t class_count) {
  ClassIndex index;
  index.members.resize(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > class_count) {
      throw Error(ErrorKind::kValue, "label " + std::to_string(labels[i]) +
                                         " outside 1.." + std::to_string(class_count));
    }
    index.members[labels[i] - 1].push_back(i);
  }
  for (std::size_t k = 0; k < index.members.size(); ++k) {
    if (index.members[k].empty()) {
      throw Error(ErrorKind::kConfiguration,
                  "class " + std::to_string(k + 1) + " has no rows");
    }
  }
  return index;
}

std::vector<std::size_t> sample_indices(std::span<const std::size_t> class_list,
                                        std::uint32_t l, RandomStream& stream) {
  Scratch scratch;
  std::vector<std::size_t> out;
  sample_into(class_list, l, stream, scratch, out);
  return out;
}

MixedSample synthesize_sample(const Matrix& features, const Matrix& onehots,
                              std::span<const std::size_t> picks, double sigma_x,
                              double sigma_y, RandomStream& stream) {
  if (picks.empty()) throw Error(ErrorKind::kDimension, "no rows to mix");
  if (features.rows() != onehots.rows()) {
    throw Error(ErrorKind::kDimension, "feature and label row counts differ");
  }
  for (std::size_t idx : picks) {
    if (idx >= features.rows()) {
      throw Error(ErrorKind::kDimension, "row index " + std::to_string(idx) + " out of range");
    }
  }
  Scratch scratch;
  MixedSample sample;
  sample.features.resize(features.cols());
  sample.label = mix_into(features, onehots, picks, sigma_x, sigma_y, stream,
                          sample.features, scratch);
  sample.label_scores = scratch.scores;
  return sample;
}

std::vector<std::uint64_t> class_sample_counts(std::uint64_t t, std::uint32_t class_count) {
  std::vector<std::uint64_t> counts(class_count, t / class_count);
  for (std::uint64_t k = 0; k < t % class_count; ++k) ++counts[k];
  return counts;
}

SyntheticDataset synthesize_dataset(const Dataset& ds, const SynthesisConfig& cfg,
                                    unsigned threads) {
  cfg.validate();
  ds.validate();
  if (ds.class_count < 2) {
    throw Error(ErrorKind::kConfiguration, "synthesis needs at least 2 classes");
  }
  if (ds.class_count > 255) {
    throw Error(ErrorKind::kConfiguration, "at most 255 classes are supported");
  }
  const ClassIndex index = partition_by_class(ds.labels, ds.class_count);
  for (std::size_t k = 0; k < index.class_count(); ++k) {
    if (index.members[k].size() < cfg.l) {
      throw Error(ErrorKind::kInsufficientClassSize,
                  "insufficient class size: class " + std::to_string(k + 1) + " has " +
                      std::to_string(index.members[k].size()) + " rows but l = " +
                      std::to_string(cfg.l));
    }
  }

  const OneHotLabels onehots = one_hot(ds.labels, ds.class_count);
  const std::vector<std::uint64_t> counts = class_sample_counts(cfg.t, ds.class_count);
  std::vector<std::uint64_t> first(counts.size() + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), first.begin() + 1);

  SyntheticDataset out;
  out.features = Matrix(cfg.t, ds.dim());
  out.labels.resize(cfg.t);
  out.class_count = ds.class_count;

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    Scratch scratch;
    std::vector<std::size_t> picks;
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(first.begin(), first.end(), begin) - first.begin() - 1);
    for (std::uint64_t s = begin; s < end; ++s) {
      while (s >= first[k + 1]) ++k;
      RandomStream stream = RandomStream::derive(cfg.seed, k + 1, s - first[k]);
      sample_into(index.members[k], cfg.l, stream, scratch, picks);
      out.labels[s] = mix_into(ds.features, onehots.y, picks, cfg.sigma_x, cfg.sigma_y,
                               stream, out.features.row(s), scratch);
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.t));
  if (workers <= 1) {
    work(0, cfg.t);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (cfg.t + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min<std::uint64_t>(cfg.t, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  out.metadata = {
      {"config", to_json(cfg)},
      {"class_counts", counts},
      {"original_labels", ds.original_labels},
      {"source", ds.source_name},
      {"n", ds.size()},
  };
  return out;
}

}  // namespace dpcda
