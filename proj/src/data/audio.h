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

#ifndef NASVAD_DATA_AUDIO_H_
#define NASVAD_DATA_AUDIO_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nasvad::data {

inline constexpr int kSampleRate = 16000;
inline constexpr int kFrameHop = 160;

struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
};

// One label per feature frame (1 = speech).
struct LabelTrack {
  std::vector<uint8_t> labels;
  int frame_hop = kFrameHop;

  int64_t speech_frames() const;
  int64_t nonspeech_frames() const;
};

// Frames produced by a centered STFT: floor(num_samples / hop) + 1.
int64_t num_frames(int64_t num_samples, int hop = kFrameHop);

struct Segment {
  double start_s;
  double end_s;
};

// Frame f is speech iff its center (f + 0.5) * hop / sample_rate lies in some
// segment [start, end).
LabelTrack rasterize_segments(const std::vector<Segment>& segments, int64_t frames,
                              int hop = kFrameHop, int sample_rate = kSampleRate);

// PCM16 mono 16 kHz only. Samples scaled by 1/32768.
AudioClip read_wav(const std::string& path);
void write_wav(const AudioClip& clip, const std::string& path);

// Lines "start_seconds end_seconds"; blank lines and '#' comments skipped.
std::vector<Segment> parse_label_lines(const std::string& text);
LabelTrack read_labels(const std::string& path, int64_t num_samples, int hop = kFrameHop);

// Clamps to [-1, 1]; returns the number of clamped samples and logs it.
int64_t clip_samples(std::vector<double>& samples);

}  // namespace nasvad::data

#endif  // NASVAD_DATA_AUDIO_H_
