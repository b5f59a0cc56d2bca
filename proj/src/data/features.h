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

#ifndef NASVAD_DATA_FEATURES_H_
#define NASVAD_DATA_FEATURES_H_

#include <cstdint>
#include <vector>

#include "data/audio.h"

namespace nasvad::data {

inline constexpr double kLogFloor = 1e-6;
// ln(kLogFloor), the value of digital silence.
double silence_floor();

struct LogMelConfig {
  int n_fft = 400;
  int hop = kFrameHop;
  int mel_bins = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
};

// Log-mel energies, row-major (frames, mel_bins).
struct SpectrogramFeature {
  int64_t frames = 0;
  int mel_bins = 0;
  std::vector<double> values;

  double& at(int64_t t, int m) { return values[static_cast<size_t>(t * mel_bins + m)]; }
  double at(int64_t t, int m) const { return values[static_cast<size_t>(t * mel_bins + m)]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// (mel_bins, n_fft / 2 + 1) triangular HTK filters, unnormalized (peak 1).
std::vector<std::vector<double>> mel_filterbank(const LogMelConfig& cfg, int sample_rate);
// Center frequency (Hz) of every filter.
std::vector<double> mel_centers(const LogMelConfig& cfg);

// Centered STFT with reflection padding, periodic Hann window, power
// spectrum, mel filterbank, ln(E + 1e-6). frames = floor(len / hop) + 1.
SpectrogramFeature logmel(const AudioClip& clip, const LogMelConfig& cfg = {});

struct AugmentConfig {
  double volume_low = -1.3862943611198906;  // ln 0.25
  double volume_high = 1.3862943611198906;  // ln 4
  int max_mask_width = 10;
};

struct AugmentDraw {
  double delta = 0.0;
  int mask_start = 0;
  int mask_width = 0;
};

AugmentDraw draw_augment(uint64_t seed, int mel_bins, const AugmentConfig& cfg = {});

// Adds delta to every value, then sets bins [start, start + width) to the
// silence floor in every frame. Operates on (frames, mel_bins) row-major.
void apply_augment(std::vector<double>& values, int mel_bins, const AugmentDraw& draw);

SpectrogramFeature augment(const SpectrogramFeature& spec, uint64_t seed,
                           const AugmentConfig& cfg = {});

}  // namespace nasvad::data

#endif  // NASVAD_DATA_FEATURES_H_
