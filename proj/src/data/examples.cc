// Copyright 2026 The nasvad Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "data/examples.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.h"
#include "common/rng.h"

namespace nasvad::data {

std::vector<Example> make_examples(const SpectrogramFeature& spec, const LabelTrack& labels,
                                   int window_frames, const std::vector<int>& offsets,
                                   int clip_index) {
  if (window_frames <= 0) throw InvalidArgument("make_examples: window_frames must be positive");
  if (offsets.empty()) throw InvalidArgument("make_examples: no target offsets");
  if (static_cast<int64_t>(labels.labels.size()) != spec.frames) {
    throw InvalidArgument("make_examples: label length " + std::to_string(labels.labels.size()) +
                          " does not match frame count " + std::to_string(spec.frames));
  }
  const int64_t frames = spec.frames;
  const int m = spec.mel_bins;
  const auto k = static_cast<int64_t>(offsets.size());
  const double floor = silence_floor();
  const int64_t count = std::max<int64_t>(1, (frames + window_frames - 1) / window_frames);
  std::vector<Example> out;
  out.reserve(static_cast<size_t>(count));
  for (int64_t w = 0; w < count; ++w) {
    Example ex;
    ex.clip = clip_index;
    ex.start_frame = w * window_frames;
    ex.input.assign(static_cast<size_t>(window_frames) * m, floor);
    ex.labels.assign(static_cast<size_t>(window_frames * k), 0);
    ex.mask.assign(static_cast<size_t>(window_frames * k), 0);
    for (int64_t r = 0; r < window_frames; ++r) {
      const int64_t t = ex.start_frame + r;
      if (t >= frames) break;
      std::copy_n(spec.values.begin() + t * m, m, ex.input.begin() + r * m);
      for (int64_t j = 0; j < k; ++j) {
        const int64_t u = t + offsets[static_cast<size_t>(j)];
        if (u < 0 || u >= frames) continue;
        ex.labels[static_cast<size_t>(r * k + j)] = labels.labels[static_cast<size_t>(u)];
        ex.mask[static_cast<size_t>(r * k + j)] = 1;
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void add_clip(ExampleSet& set, const std::string& name, const SpectrogramFeature& spec,
              const LabelTrack& labels) {
  if (spec.mel_bins != set.mel_bins) {
    throw InvalidArgument("add_clip: clip has " + std::to_string(spec.mel_bins) +
                          " mel bins, set expects " + std::to_string(set.mel_bins));
  }
  const int index = static_cast<int>(set.clips.size());
  set.clips.push_back({name, labels.labels});
  for (Example& ex : make_examples(spec, labels, set.window_frames, set.offsets, index)) {
    set.examples.push_back(std::move(ex));
  }
}

Split split_dataset(size_t n, uint64_t seed, double train_ratio, double val_ratio,
                    double test_ratio) {
  if (n < 3) throw InvalidArgument("split_dataset: need at least 3 items, got " + std::to_string(n));
  if (!(train_ratio > 0 && val_ratio > 0 && test_ratio > 0)) {
    throw InvalidArgument("split_dataset: ratios must be positive");
  }
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  Rng rng(seed);
  rng.shuffle(idx);
  const double total = train_ratio + val_ratio + test_ratio;
  const auto nd = static_cast<double>(n);
  auto n_val = static_cast<size_t>(std::max(1.0, std::round(nd * val_ratio / total)));
  auto n_test = static_cast<size_t>(std::max(1.0, std::round(nd * test_ratio / total)));
  auto n_train = static_cast<size_t>(std::round(nd * train_ratio / total));
  n_train = std::min(n_train, n - n_val - n_test);
  if (n_train == 0) {
    n_train = 1;
    if (n_val > 1) {
      --n_val;
    } else {
      --n_test;
    }
  }
  n_test = n - n_train - n_val;
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
               idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
  return s;
}

}  // namespace nasvad::data
