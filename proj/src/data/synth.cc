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

#include "data/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.h"
#include "common/rng.h"

namespace nasvad::data {

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kTonal: return "tonal";
  }
  return "white";
}

NoiseKind noise_kind_from_name(const std::string& name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  if (name == "tonal") return NoiseKind::kTonal;
  throw SchemaError("unknown noise kind '" + name + "'");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int64_t seconds_to_samples(double s) {
  return static_cast<int64_t>(std::llround(s * kSampleRate));
}

}  // namespace

SpeechSurrogate synth_speech(uint64_t seed, double duration_s) {
  if (!(duration_s > 0)) throw InvalidArgument("synth_speech: duration must be positive");
  Rng rng(seed);
  SpeechSurrogate out;
  const int64_t n = std::max<int64_t>(1, seconds_to_samples(duration_s));
  out.clip.samples.assign(static_cast<size_t>(n), 0.0);

  double t = rng.uniform(0.2, 0.6);
  while (t < duration_s) {
    const double len = rng.uniform(0.3, 1.0);
    const double end = std::min(duration_s, t + len);
    if (end - t >= 0.1) out.bursts.push_back({t, end});
    t = end + rng.uniform(0.2, 0.8);
  }

  for (const Segment& b : out.bursts) {
    const double f0 = rng.uniform(100.0, 300.0);
    const double vibrato_rate = rng.uniform(3.0, 6.0);
    const double vibrato_depth = rng.uniform(0.0, 0.04);
    const double syllable_rate = rng.uniform(3.0, 6.0);
    const double syllable_phase = rng.uniform(0.0, kTwoPi);
    const double peak = rng.uniform(0.25, 0.6);
    const double formant = rng.uniform(500.0, 1500.0);
    const int harmonics = static_cast<int>(std::min(3800.0 / f0, 30.0));
    std::vector<double> amp(static_cast<size_t>(harmonics));
    std::vector<double> phase(static_cast<size_t>(harmonics));
    double norm = 0.0;
    for (int h = 0; h < harmonics; ++h) {
      const double fh = f0 * (h + 1);
      const double d = (fh - formant) / 600.0;
      amp[static_cast<size_t>(h)] = (1.0 / (h + 1)) * (0.4 + std::exp(-d * d));
      phase[static_cast<size_t>(h)] = rng.uniform(0.0, kTwoPi);
      norm += amp[static_cast<size_t>(h)];
    }
    const int64_t s0 = seconds_to_samples(b.start_s);
    const int64_t s1 = std::min(n, seconds_to_samples(b.end_s));
    const double ramp = 0.02 * kSampleRate;
    double theta = 0.0;
    for (int64_t s = s0; s < s1; ++s) {
      const double tt = static_cast<double>(s - s0) / kSampleRate;
      const double f = f0 * (1.0 + vibrato_depth * std::sin(kTwoPi * vibrato_rate * tt));
      theta += kTwoPi * f / kSampleRate;
      double v = 0.0;
      for (int h = 0; h < harmonics; ++h) {
        v += amp[static_cast<size_t>(h)] * std::sin((h + 1) * theta + phase[static_cast<size_t>(h)]);
      }
      const double env = 0.55 + 0.45 * std::sin(kTwoPi * syllable_rate * tt + syllable_phase);
      const double edge = std::min({1.0, (s - s0 + 1) / ramp, (s1 - s) / ramp});
      out.clip.samples[static_cast<size_t>(s)] = peak * env * edge * v / norm;
    }
  }
  clip_samples(out.clip.samples);
  out.labels = rasterize_segments(out.bursts, num_frames(n));
  return out;
}

AudioClip synth_noise_samples(uint64_t seed, int64_t num_samples, NoiseKind kind) {
  if (num_samples <= 0) throw InvalidArgument("synth_noise: length must be positive");
  Rng rng(seed);
  AudioClip clip;
  clip.samples.resize(static_cast<size_t>(num_samples));
  switch (kind) {
    case NoiseKind::kWhite:
      for (double& s : clip.samples) s = 0.1 * rng.normal();
      break;
    case NoiseKind::kPink: {
      // Paul Kellet's refined filter.
      double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
      for (double& s : clip.samples) {
        const double w = rng.normal();
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        s = 0.03 * (b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362);
        b6 = w * 0.115926;
      }
      break;
    }
    case NoiseKind::kTonal: {
      const int tones = static_cast<int>(rng.uniform_int(1, 3));
      std::vector<double> freq, amp, ph;
      for (int i = 0; i < tones; ++i) {
        freq.push_back(rng.uniform(200.0, 4000.0));
        amp.push_back(rng.uniform(0.05, 0.2));
        ph.push_back(rng.uniform(0.0, kTwoPi));
      }
      for (int64_t s = 0; s < num_samples; ++s) {
        double v = 0.01 * rng.normal();
        for (int i = 0; i < tones; ++i) {
          v += amp[static_cast<size_t>(i)] *
               std::sin(kTwoPi * freq[static_cast<size_t>(i)] * s / kSampleRate + ph[static_cast<size_t>(i)]);
        }
        clip.samples[static_cast<size_t>(s)] = v;
      }
      break;
    }
  }
  clip_samples(clip.samples);
  return clip;
}

AudioClip synth_noise(uint64_t seed, double duration_s, NoiseKind kind) {
  if (!(duration_s > 0)) throw InvalidArgument("synth_noise: duration must be positive");
  return synth_noise_samples(seed, std::max<int64_t>(1, seconds_to_samples(duration_s)), kind);
}

}  // namespace nasvad::data
