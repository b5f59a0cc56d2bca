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

#ifndef NASVAD_DATA_SYNTH_H_
#define NASVAD_DATA_SYNTH_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "data/audio.h"

namespace nasvad::data {

enum class NoiseKind { kWhite, kPink, kTonal };

std::string noise_kind_name(NoiseKind kind);
NoiseKind noise_kind_from_name(const std::string& name);

struct SpeechSurrogate {
  AudioClip clip;
  LabelTrack labels;
  std::vector<Segment> bursts;
};

// Voiced bursts (harmonic stacks on a 100-300 Hz fundamental, syllable-rate
// amplitude modulation) separated by digital silence. Starts with silence.
SpeechSurrogate synth_speech(uint64_t seed, double duration_s);

AudioClip synth_noise(uint64_t seed, double duration_s, NoiseKind kind);
AudioClip synth_noise_samples(uint64_t seed, int64_t num_samples, NoiseKind kind);

}  // namespace nasvad::data

#endif  // NASVAD_DATA_SYNTH_H_
