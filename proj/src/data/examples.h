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

#ifndef NASVAD_DATA_EXAMPLES_H_
#define NASVAD_DATA_EXAMPLES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "data/audio.h"
#include "data/features.h"

namespace nasvad::data {

// One training window: input (window, mel_bins), labels and mask
// (window, |offsets|), all row-major.
struct Example {
  int clip = 0;
  int64_t start_frame = 0;
  std::vector<double> input;
  std::vector<uint8_t> labels;
  std::vector<uint8_t> mask;
};

struct ClipFrames {
  std::string name;
  std::vector<uint8_t> labels;
};

struct ExampleSet {
  int window_frames = 64;
  int mel_bins = 80;
  std::vector<int> offsets;
  std::vector<ClipFrames> clips;
  std::vector<Example> examples;

  size_t size() const { return examples.size(); }
  int num_offsets() const { return static_cast<int>(offsets.size()); }
};

// Non-overlapping windows starting at frame 0. Row r of a window starting at
// s is absolute frame t = s + r; column j targets t + offsets[j]. Mask is 0
// when t is past the clip end (right padding, input = silence floor) or the
// target falls outside the clip.
std::vector<Example> make_examples(const SpectrogramFeature& spec, const LabelTrack& labels,
                                   int window_frames, const std::vector<int>& offsets,
                                   int clip_index = 0);

// Appends a clip's windows to `set` with the set's geometry.
void add_clip(ExampleSet& set, const std::string& name, const SpectrogramFeature& spec,
              const LabelTrack& labels);

struct Split {
  std::vector<size_t> train;
  std::vector<size_t> val;
  std::vector<size_t> test;
};

// Seeded shuffle of 0..n-1, then contiguous train/val/test by ratio with
// round-to-nearest; val and test get at least one item each.
Split split_dataset(size_t n, uint64_t seed, double train_ratio = 8, double val_ratio = 1,
                    double test_ratio = 1);

}  // namespace nasvad::data

#endif  // NASVAD_DATA_EXAMPLES_H_
