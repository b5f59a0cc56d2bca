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

#ifndef NASVAD_DATA_MIX_H_
#define NASVAD_DATA_MIX_H_

#include <cstdint>
#include <vector>

#include "data/audio.h"

namespace nasvad::data {

inline constexpr double kMinSnrDb = -40.0;
inline constexpr double kMaxSnrDb = 40.0;
// Per-frame mean-square threshold for noise activity (-60 dBFS).
inline constexpr double kNoiseActiveMeanSquare = 1e-6;

struct MixConfig {
  double snr_low_db = -10.0;
  double snr_high_db = 10.0;
  void validate() const;
};

// Appends digital silence, split at a random frame boundary between head and
// tail, until non-speech frames equal speech frames. No-op otherwise.
struct PadResult {
  AudioClip clip;
  LabelTrack labels;
  int64_t head_frames = 0;
  int64_t tail_frames = 0;
};
PadResult pad_balance(const AudioClip& speech, const LabelTrack& labels, uint64_t seed);

// Mean square over the samples of the selected frames; frame f covers samples
// [f * hop, (f + 1) * hop) clipped to the clip. Returns 0 for no samples.
double frame_power(const std::vector<double>& samples, const std::vector<uint8_t>& selected,
                   int hop = kFrameHop);

// Frames of `samples` whose mean square exceeds kNoiseActiveMeanSquare.
std::vector<uint8_t> active_frames(const std::vector<double>& samples, int hop = kFrameHop);

// Tiles (if short) then crops at a seeded offset to exactly `length` samples.
std::vector<double> fit_noise(const std::vector<double>& noise, int64_t length, uint64_t seed);

struct MixResult {
  AudioClip mixture;
  std::vector<double> scaled_noise;  // g * fitted noise, before clipping
  double gain = 0.0;
  double speech_power = 0.0;
  double noise_power = 0.0;  // of the unscaled fitted noise over its active frames
  int64_t clipped = 0;
};

// Scales noise so that speech power over speech-labeled frames over scaled
// noise power over its active frames equals snr_db, adds, clips.
MixResult mix_at_snr(const AudioClip& speech, const LabelTrack& labels, const AudioClip& noise,
                     double snr_db, uint64_t seed = 0);

}  // namespace nasvad::data

#endif  // NASVAD_DATA_MIX_H_
