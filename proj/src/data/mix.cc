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

#include "data/mix.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"
#include "common/rng.h"

namespace nasvad::data {

void MixConfig::validate() const {
  if (!(snr_low_db <= snr_high_db)) throw SchemaError("snr_low_db must be <= snr_high_db");
  if (snr_low_db < kMinSnrDb || snr_high_db > kMaxSnrDb) {
    throw SchemaError("SNR range must lie within [-40, 40] dB");
  }
}

PadResult pad_balance(const AudioClip& speech, const LabelTrack& labels, uint64_t seed) {
  const int hop = labels.frame_hop;
  if (static_cast<int64_t>(labels.labels.size()) !=
      num_frames(static_cast<int64_t>(speech.samples.size()), hop)) {
    throw InvalidArgument("pad_balance: label length does not match clip frame count");
  }
  PadResult out{speech, labels, 0, 0};
  const int64_t s = labels.speech_frames();
  const int64_t ns = labels.nonspeech_frames();
  if (ns >= s) return out;
  const int64_t pad = s - ns;
  Rng rng(seed);
  out.head_frames = rng.uniform_int(0, pad);
  out.tail_frames = pad - out.head_frames;
  out.clip.samples.clear();
  out.clip.samples.reserve(speech.samples.size() + static_cast<size_t>(pad * hop));
  out.clip.samples.assign(static_cast<size_t>(out.head_frames * hop), 0.0);
  out.clip.samples.insert(out.clip.samples.end(), speech.samples.begin(), speech.samples.end());
  out.clip.samples.resize(out.clip.samples.size() + static_cast<size_t>(out.tail_frames * hop), 0.0);
  out.labels.labels.assign(static_cast<size_t>(out.head_frames), 0);
  out.labels.labels.insert(out.labels.labels.end(), labels.labels.begin(), labels.labels.end());
  out.labels.labels.resize(out.labels.labels.size() + static_cast<size_t>(out.tail_frames), 0);
  return out;
}

double frame_power(const std::vector<double>& samples, const std::vector<uint8_t>& selected,
                   int hop) {
  double sum = 0.0;
  int64_t count = 0;
  const auto n = static_cast<int64_t>(samples.size());
  for (size_t f = 0; f < selected.size(); ++f) {
    if (!selected[f]) continue;
    const int64_t a = static_cast<int64_t>(f) * hop;
    const int64_t b = std::min(n, a + hop);
    for (int64_t i = a; i < b; ++i) sum += samples[static_cast<size_t>(i)] * samples[static_cast<size_t>(i)];
    count += std::max<int64_t>(0, b - a);
  }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

std::vector<uint8_t> active_frames(const std::vector<double>& samples, int hop) {
  const auto n = static_cast<int64_t>(samples.size());
  std::vector<uint8_t> active(static_cast<size_t>(num_frames(n, hop)), 0);
  for (size_t f = 0; f < active.size(); ++f) {
    const int64_t a = static_cast<int64_t>(f) * hop;
    const int64_t b = std::min(n, a + hop);
    if (b <= a) continue;
    double sum = 0.0;
    for (int64_t i = a; i < b; ++i) sum += samples[static_cast<size_t>(i)] * samples[static_cast<size_t>(i)];
    active[f] = sum / static_cast<double>(b - a) > kNoiseActiveMeanSquare ? 1 : 0;
  }
  return active;
}

std::vector<double> fit_noise(const std::vector<double>& noise, int64_t length, uint64_t seed) {
  if (noise.empty()) throw InvalidArgument("fit_noise: empty noise clip");
  const auto n = static_cast<int64_t>(noise.size());
  std::vector<double> out(static_cast<size_t>(length));
  Rng rng(seed);
  const int64_t offset = n > length ? rng.uniform_int(0, n - length) : 0;
  for (int64_t i = 0; i < length; ++i) out[static_cast<size_t>(i)] = noise[static_cast<size_t>((offset + i) % n)];
  return out;
}

MixResult mix_at_snr(const AudioClip& speech, const LabelTrack& labels, const AudioClip& noise,
                     double snr_db, uint64_t seed) {
  if (!std::isfinite(snr_db) || snr_db < kMinSnrDb || snr_db > kMaxSnrDb) {
    throw InvalidArgument("mix_at_snr: snr_db must lie in [-40, 40]");
  }
  if (speech.sample_rate != noise.sample_rate) {
    throw InvalidArgument("mix_at_snr: sample rates differ");
  }
  const auto len = static_cast<int64_t>(speech.samples.size());
  if (static_cast<int64_t>(labels.labels.size()) != num_frames(len, labels.frame_hop)) {
    throw InvalidArgument("mix_at_snr: label length does not match clip frame count");
  }
  MixResult out;
  out.speech_power = frame_power(speech.samples, labels.labels, labels.frame_hop);
  std::vector<double> fitted = fit_noise(noise.samples, len, seed);
  out.noise_power = frame_power(fitted, active_frames(fitted, labels.frame_hop), labels.frame_hop);
  if (out.speech_power <= 0.0 || out.noise_power <= 0.0) {
    throw InvalidArgument("mix_at_snr: silent source");
  }
  out.gain = std::sqrt(out.speech_power / (out.noise_power * std::pow(10.0, snr_db / 10.0)));
  out.scaled_noise = std::move(fitted);
  for (double& v : out.scaled_noise) v *= out.gain;
  out.mixture.sample_rate = speech.sample_rate;
  out.mixture.samples.resize(static_cast<size_t>(len));
  for (int64_t i = 0; i < len; ++i) {
    out.mixture.samples[static_cast<size_t>(i)] =
        speech.samples[static_cast<size_t>(i)] + out.scaled_noise[static_cast<size_t>(i)];
  }
  out.clipped = clip_samples(out.mixture.samples);
  return out;
}

}  // namespace nasvad::data
