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

#ifndef NASVAD_DATA_DATASET_H_
#define NASVAD_DATA_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "data/examples.h"
#include "data/features.h"
#include "data/mix.h"

namespace nasvad::data {

inline constexpr int kDatasetFormatVersion = 1;

struct SynthDataConfig {
  uint64_t seed = 1;
  int clips = 20;
  double duration_s = 4.0;
  MixConfig mix;
  LogMelConfig feature;

  void validate() const;
};

struct ClipMeta {
  std::string name;
  uint64_t speech_seed = 0;
  uint64_t noise_seed = 0;
  std::string noise_kind;
  double snr_db = 0.0;
  int64_t frames = 0;
  int64_t speech_frames = 0;
  int64_t pad_head_frames = 0;
  int64_t pad_tail_frames = 0;
  int64_t clipped_samples = 0;
};

struct ClipData {
  ClipMeta meta;
  SpectrogramFeature features;
  LabelTrack labels;
};

// Clean surrogate speech, balanced with silence, mixed with seeded noise at
// an SNR drawn uniformly from the configured range, then log-mel features.
ClipData synth_clip(const SynthDataConfig& cfg, int index);

// Every clip plus the 8:1:1 split; clips are generated on `jobs` threads.
struct Dataset {
  SynthDataConfig config;
  std::vector<ClipData> clips;
  Split split;
  nlohmann::json manifest;
};

Dataset synth_dataset(const SynthDataConfig& cfg, int jobs = 1);

// Writes manifest.json and one record file per clip.
void save_dataset(const Dataset& ds, const std::string& dir);
// Reads a directory written by save_dataset.
Dataset load_dataset(const std::string& dir);

// Record file: "NVADREC1", uint64 frames, uint32 mel_bins, frames * mel_bins
// float64 features, frames uint8 labels; little endian.
void write_record(const ClipData& clip, const std::string& path);
ClipData read_record(const std::string& path);

// Windows of the named split ("train", "val" or "test").
ExampleSet examples_for_split(const Dataset& ds, const std::string& split, int window_frames,
                              const std::vector<int>& offsets);
// Windows of every clip.
ExampleSet examples_for_all(const Dataset& ds, int window_frames, const std::vector<int>& offsets);

}  // namespace nasvad::data

#endif  // NASVAD_DATA_DATASET_H_
