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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "doctest.h"

#include "common/error.h"
#include "common/rng.h"
#include "data/audio.h"
#include "data/dataset.h"
#include "data/examples.h"
#include "data/features.h"
#include "data/mix.h"
#include "data/synth.h"
#include "test_support.h"

namespace nasvad::data {
namespace {

AudioClip sine(double hz, double amplitude, int64_t n, double phase = 0.0) {
  AudioClip c;
  for (int64_t i = 0; i < n; ++i) {
    c.samples.push_back(amplitude * std::sin(2.0 * std::numbers::pi * hz * i / kSampleRate + phase));
  }
  return c;
}

void write_raw_wav(const std::string& path, int rate, int channels, int bits,
                   const std::vector<int16_t>& pcm) {
  std::ofstream f(path, std::ios::binary);
  auto u32 = [&f](uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&f](uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
  const uint32_t data_bytes = static_cast<uint32_t>(pcm.size() * 2);
  f.write("RIFF", 4);
  u32(36 + data_bytes);
  f.write("WAVEfmt ", 8);
  u32(16);
  u16(1);
  u16(static_cast<uint16_t>(channels));
  u32(static_cast<uint32_t>(rate));
  u32(static_cast<uint32_t>(rate * channels * bits / 8));
  u16(static_cast<uint16_t>(channels * bits / 8));
  u16(static_cast<uint16_t>(bits));
  f.write("data", 4);
  u32(data_bytes);
  f.write(reinterpret_cast<const char*>(pcm.data()), data_bytes);
}

TEST_CASE("frame arithmetic and rasterization") {
  CHECK(num_frames(16000) == 101);
  CHECK(num_frames(159) == 1);
  CHECK(num_frames(160) == 2);
  const std::vector<Segment> segs = {{0.1, 0.25}, {0.5, 0.52}};
  LabelTrack t = rasterize_segments(segs, 60);
  for (int f = 0; f < 60; ++f) {
    const double center = (f + 0.5) * 0.01;
    bool speech = false;
    for (const auto& s : segs) speech = speech || (center >= s.start_s && center < s.end_s);
    CHECK(t.labels[f] == speech);
  }
  CHECK(t.speech_frames() == 15 + 2);
  CHECK(t.nonspeech_frames() == 60 - 17);
}

TEST_CASE("label file parsing") {
  auto segs = parse_label_lines("# comment\n0.5 1.0\n\n2 2.5  \n");
  REQUIRE(segs.size() == 2);
  CHECK(segs[1].start_s == 2.0);
  CHECK(segs[1].end_s == 2.5);
  CHECK_THROWS_WITH(parse_label_lines("0.5 1.0\nspeech\n"),
                    doctest::Contains("malformed label line 2"));
  const std::string dir = testing::make_temp_dir("labels");
  std::ofstream(dir + "/l.txt") << "0.0 0.05\n";
  LabelTrack t = read_labels(dir + "/l.txt", 1600);
  CHECK(t.labels.size() == 11);
  CHECK(t.speech_frames() == 5);
}

TEST_CASE("WAV input") {
  const std::string dir = testing::make_temp_dir("wav");
  AudioClip c = sine(440, 0.5, 1000);
  write_wav(c, dir + "/a.wav");
  AudioClip back = read_wav(dir + "/a.wav");
  REQUIRE(back.samples.size() == 1000);
  for (size_t i = 0; i < 1000; ++i) CHECK(std::abs(back.samples[i] - c.samples[i]) <= 1.0 / 32768);

  write_raw_wav(dir + "/8k.wav", 8000, 1, 16, std::vector<int16_t>(100, 0));
  try {
    read_wav(dir + "/8k.wav");
    FAIL("8 kHz accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchema);
    CHECK(std::string(e.what()).find("unsupported sample rate 8000") != std::string::npos);
  }
  write_raw_wav(dir + "/st.wav", 16000, 2, 16, std::vector<int16_t>(100, 0));
  CHECK_THROWS_WITH(read_wav(dir + "/st.wav"), doctest::Contains("channel count 2"));
  std::ofstream(dir + "/junk.wav") << "hello";
  CHECK_THROWS_AS(read_wav(dir + "/junk.wav"), Error);
  try {
    read_wav(dir + "/missing.wav");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("clipping") {
  std::vector<double> s = {0.5, 1.5, -2.0, -1.0};
  CHECK(clip_samples(s) == 2);
  CHECK(s == std::vector<double>{0.5, 1.0, -1.0, -1.0});
}

TEST_CASE("pad_balance equalizes classes") {
  AudioClip clip = sine(200, 0.3, 999 * kFrameHop);
  LabelTrack labels;
  labels.labels.assign(1000, 0);
  std::fill(labels.labels.begin() + 100, labels.labels.begin() + 900, 1);
  REQUIRE(labels.speech_frames() == 800);
  REQUIRE(labels.nonspeech_frames() == 200);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    PadResult p = pad_balance(clip, labels, seed);
    CHECK(p.labels.speech_frames() == 800);
    CHECK(p.labels.nonspeech_frames() == 800);
    CHECK(p.head_frames + p.tail_frames == 600);
    CHECK(static_cast<int64_t>(p.labels.labels.size()) ==
          num_frames(static_cast<int64_t>(p.clip.samples.size())));
    for (int64_t i = 0; i < p.head_frames * kFrameHop; ++i) CHECK(p.clip.samples[i] == 0.0);
    CHECK(p.clip.samples[p.head_frames * kFrameHop + 7] == clip.samples[7]);
  }
  LabelTrack mostly_silent = labels;
  std::fill(mostly_silent.labels.begin(), mostly_silent.labels.end(), 0);
  PadResult same = pad_balance(clip, mostly_silent, 1);
  CHECK(same.clip.samples == clip.samples);
  CHECK(same.head_frames == 0);
  LabelTrack wrong = labels;
  wrong.labels.pop_back();
  CHECK_THROWS_AS(pad_balance(clip, wrong, 0), Error);
}

double oracle_snr(const AudioClip& speech, const LabelTrack& labels, const MixResult& m) {
  double ps = 0, pn = 0;
  int64_t ns = 0, nn = 0;
  const auto n = static_cast<int64_t>(speech.samples.size());
  for (size_t f = 0; f < labels.labels.size(); ++f) {
    const int64_t a = static_cast<int64_t>(f) * kFrameHop;
    const int64_t b = std::min(n, a + kFrameHop);
    double noise_ms = 0;
    for (int64_t i = a; i < b; ++i) {
      const double u = m.scaled_noise[i] / m.gain;
      noise_ms += u * u;
    }
    const bool noise_active = b > a && noise_ms / static_cast<double>(b - a) > 1e-6;
    for (int64_t i = a; i < b; ++i) {
      if (labels.labels[f]) {
        ps += speech.samples[i] * speech.samples[i];
        ++ns;
      }
      if (noise_active) {
        pn += m.scaled_noise[i] * m.scaled_noise[i];
        ++nn;
      }
    }
  }
  return 10.0 * std::log10((ps / ns) / (pn / nn));
}

TEST_CASE("mix_at_snr hits the requested active-region SNR") {
  SpeechSurrogate s = synth_speech(3, 3.0);
  for (NoiseKind kind : {NoiseKind::kWhite, NoiseKind::kPink, NoiseKind::kTonal}) {
    AudioClip noise = synth_noise(4, 1.3, kind);
    for (double snr : {-10.0, 0.0, 10.0}) {
      MixResult m = mix_at_snr(s.clip, s.labels, noise, snr, 7);
      CHECK(std::abs(oracle_snr(s.clip, s.labels, m) - snr) < 1e-6);
      CHECK(m.mixture.samples.size() == s.clip.samples.size());
      for (double v : m.mixture.samples) CHECK(std::abs(v) <= 1.0);
    }
  }
  SUBCASE("noise with silent stretches") {
    AudioClip noise = synth_noise(5, 2.0, NoiseKind::kWhite);
    std::fill(noise.samples.begin(), noise.samples.begin() + 8000, 0.0);
    MixResult m = mix_at_snr(s.clip, s.labels, noise, 0.0, 1);
    CHECK(std::abs(oracle_snr(s.clip, s.labels, m)) < 1e-6);
  }
  SUBCASE("errors") {
    AudioClip silent;
    silent.samples.assign(1000, 0.0);
    CHECK_THROWS_WITH(mix_at_snr(s.clip, s.labels, silent, 0.0),
                      doctest::Contains("silent source"));
    CHECK_THROWS_AS(mix_at_snr(s.clip, s.labels, synth_noise(1, 1.0, NoiseKind::kPink), 50.0),
                    Error);
  }
}

TEST_CASE("noise fitting") {
  std::vector<double> noise = {1, 2, 3};
  auto f = fit_noise(noise, 8, 0);
  CHECK(f.size() == 8);
  for (size_t i = 1; i < f.size(); ++i) {
    CHECK(f[i] == noise[(static_cast<size_t>(std::find(noise.begin(), noise.end(), f[0]) -
                                             noise.begin()) + i) % 3]);
  }
  CHECK(fit_noise(noise, 8, 0) == f);
}

TEST_CASE("surrogate speech") {
  SpeechSurrogate s = synth_speech(11, 4.0);
  CHECK(s.clip.samples.size() == 64000);
  CHECK(s.labels.labels.size() == static_cast<size_t>(num_frames(64000)));
  CHECK(s.labels.labels[0] == 0);
  CHECK(s.labels.speech_frames() > 0);
  CHECK(frame_power(s.clip.samples, s.labels.labels) > 1e-4);
  std::vector<uint8_t> silent(s.labels.labels.size());
  for (size_t i = 0; i < silent.size(); ++i) silent[i] = !s.labels.labels[i];
  CHECK(synth_speech(11, 4.0).clip.samples == s.clip.samples);
  CHECK(noise_kind_from_name(noise_kind_name(NoiseKind::kPink)) == NoiseKind::kPink);
  CHECK_THROWS_AS(noise_kind_from_name("brown"), Error);
}

TEST_CASE("log-mel features") {
  SUBCASE("silence sits on the floor") {
    AudioClip z;
    z.samples.assign(3200, 0.0);
    SpectrogramFeature f = logmel(z);
    CHECK(f.frames == 21);
    CHECK(f.mel_bins == 80);
    for (double v : f.values) CHECK(v == silence_floor());
    CHECK(silence_floor() == std::log(1e-6));
  }
  SUBCASE("a 1 kHz tone peaks at the nearest filter") {
    SpectrogramFeature f = logmel(sine(1000, 0.5, 16000));
    auto centers = mel_centers(LogMelConfig{});
    int nearest = 0;
    for (int m = 0; m < 80; ++m) {
      if (std::abs(centers[m] - 1000) < std::abs(centers[nearest] - 1000)) nearest = m;
    }
    for (int64_t t = 2; t < f.frames - 2; ++t) {
      int arg = 0;
      for (int m = 0; m < 80; ++m) {
        if (f.at(t, m) > f.at(t, arg)) arg = m;
      }
      CHECK(arg == nearest);
    }
  }
  SUBCASE("doubling amplitude adds ln 4") {
    SpectrogramFeature a = logmel(sine(1000, 0.25, 8000));
    SpectrogramFeature b = logmel(sine(1000, 0.5, 8000));
    int arg = 0;
    for (int m = 0; m < 80; ++m) {
      if (a.at(10, m) > a.at(10, arg)) arg = m;
    }
    CHECK(std::abs((b.at(10, arg) - a.at(10, arg)) - std::log(4.0)) < 1e-6);
  }
  SUBCASE("a one-hop delay shifts frames by one") {
    AudioClip a = sine(700, 0.4, 6400);
    Rng rng(1);
    for (double& v : a.samples) v += 0.01 * rng.normal();
    AudioClip s;
    s.samples.assign(kFrameHop, 0.0);
    s.samples.insert(s.samples.end(), a.samples.begin(), a.samples.end() - kFrameHop);
    SpectrogramFeature fa = logmel(a);
    SpectrogramFeature fs = logmel(s);
    for (int64_t t = 3; t + 3 < fa.frames; ++t) {
      for (int m = 0; m < 80; ++m) CHECK(fs.at(t + 1, m) == doctest::Approx(fa.at(t, m)).epsilon(1e-9));
    }
  }
  SUBCASE("filterbank shape") {
    auto fb = mel_filterbank(LogMelConfig{}, kSampleRate);
    CHECK(fb.size() == 80);
    CHECK(fb[0].size() == 201);
    for (const auto& row : fb) {
      CHECK(*std::max_element(row.begin(), row.end()) <= 1.0);
      CHECK(*std::min_element(row.begin(), row.end()) >= 0.0);
    }
    CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  }
  SUBCASE("short clip") {
    AudioClip c;
    c.samples.assign(100, 0.1);
    CHECK_THROWS_AS(logmel(c), Error);
  }
}

TEST_CASE("augmentation contract") {
  SpectrogramFeature f = logmel(sine(500, 0.3, 4000));
  for (uint64_t seed = 0; seed < 50; ++seed) {
    AugmentDraw d = draw_augment(seed, 80);
    CHECK(d.delta >= std::log(0.25));
    CHECK(d.delta <= std::log(4.0));
    CHECK(d.mask_width >= 0);
    CHECK(d.mask_width <= 10);
    CHECK(d.mask_start >= 0);
    CHECK(d.mask_start + d.mask_width <= 80);
    SpectrogramFeature g = augment(f, seed);
    for (int64_t t = 0; t < f.frames; ++t) {
      for (int m = 0; m < 80; ++m) {
        if (m >= d.mask_start && m < d.mask_start + d.mask_width) {
          CHECK(g.at(t, m) == silence_floor());
        } else {
          CHECK(g.at(t, m) == f.at(t, m) + d.delta);
        }
      }
    }
  }
}

TEST_CASE("make_examples follows the index arithmetic") {
  const std::vector<int> offsets = {-19, -10, -1, 0, 1, 10, 19};
  SpectrogramFeature spec;
  spec.frames = 150;
  spec.mel_bins = 4;
  for (int64_t i = 0; i < spec.frames * 4; ++i) spec.values.push_back(0.01 * i);
  LabelTrack labels;
  Rng rng(3);
  for (int i = 0; i < 150; ++i) labels.labels.push_back(rng.uniform() < 0.5);
  const int w = 64;
  auto ex = make_examples(spec, labels, w, offsets, 2);
  REQUIRE(ex.size() == 3);
  for (size_t e = 0; e < ex.size(); ++e) {
    CHECK(ex[e].clip == 2);
    CHECK(ex[e].start_frame == static_cast<int64_t>(e) * w);
    for (int r = 0; r < w; ++r) {
      const int64_t t = ex[e].start_frame + r;
      for (int m = 0; m < 4; ++m) {
        const double expect = t < 150 ? spec.at(t, m) : silence_floor();
        CHECK(ex[e].input[r * 4 + m] == expect);
      }
      for (size_t j = 0; j < offsets.size(); ++j) {
        const int64_t target = t + offsets[j];
        const bool valid = t < 150 && target >= 0 && target < 150;
        const size_t idx = r * offsets.size() + j;
        CHECK(ex[e].mask[idx] == valid);
        CHECK(ex[e].labels[idx] == (valid ? labels.labels[target] : 0));
      }
    }
  }
  LabelTrack short_labels = labels;
  short_labels.labels.pop_back();
  CHECK_THROWS_AS(make_examples(spec, short_labels, w, offsets), Error);
}

TEST_CASE("dataset splits") {
  for (auto [n, tr, va, te] : std::vector<std::array<size_t, 4>>{{100, 80, 10, 10}, {10, 8, 1, 1},
                                                                  {3, 1, 1, 1}, {20, 16, 2, 2}}) {
    Split s = split_dataset(n, 5);
    CHECK(s.train.size() == tr);
    CHECK(s.val.size() == va);
    CHECK(s.test.size() == te);
    std::set<size_t> all(s.train.begin(), s.train.end());
    all.insert(s.val.begin(), s.val.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == n);
    CHECK(*all.rbegin() == n - 1);
    CHECK(split_dataset(n, 5).train == s.train);
  }
  CHECK(split_dataset(100, 5).train != split_dataset(100, 6).train);
  CHECK_THROWS_AS(split_dataset(2, 0), Error);
}

TEST_CASE("synthetic dataset round trip") {
  SynthDataConfig cfg;
  cfg.clips = 4;
  cfg.duration_s = 1.5;
  cfg.seed = 9;
  Dataset ds = synth_dataset(cfg, 2);
  REQUIRE(ds.clips.size() == 4);
  Dataset again = synth_dataset(cfg, 1);
  for (size_t i = 0; i < 4; ++i) {
    const ClipData& c = ds.clips[i];
    CHECK(c.features.values == again.clips[i].features.values);
    CHECK(c.labels.speech_frames() <= c.labels.nonspeech_frames());
    if (c.meta.pad_head_frames + c.meta.pad_tail_frames > 0) {
      CHECK(c.labels.speech_frames() == c.labels.nonspeech_frames());
    }
    CHECK(c.meta.snr_db >= -10.0);
    CHECK(c.meta.snr_db <= 10.0);
    CHECK(c.features.frames == static_cast<int64_t>(c.labels.labels.size()));
  }
  const std::string dir = testing::make_temp_dir("ds");
  save_dataset(ds, dir);
  Dataset loaded = load_dataset(dir);
  CHECK(loaded.manifest == ds.manifest);
  CHECK(loaded.split.train == ds.split.train);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(loaded.clips[i].features.values == ds.clips[i].features.values);
    CHECK(loaded.clips[i].labels.labels == ds.clips[i].labels.labels);
  }
  ExampleSet tr = examples_for_split(loaded, "train", 64, {-1, 0, 1});
  ExampleSet all = examples_for_all(loaded, 64, {-1, 0, 1});
  CHECK(tr.clips.size() == ds.split.train.size());
  CHECK(all.clips.size() == 4);
  CHECK_THROWS_AS(examples_for_split(loaded, "dev", 64, {0}), Error);

  std::filesystem::resize_file(dir + "/clip_0001.rec", 20);
  CHECK_THROWS_AS(load_dataset(dir), Error);
  CHECK_THROWS_AS(load_dataset(dir + "/nowhere"), Error);

  SynthDataConfig bad = cfg;
  bad.clips = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.mix.snr_low_db = 5;
  bad.mix.snr_high_db = -5;
  CHECK_THROWS_AS(bad.validate(), Error);
}

}  // namespace
}  // namespace nasvad::data
