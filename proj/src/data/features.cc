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

#include "data/features.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "common/error.h"
#include "common/rng.h"

namespace nasvad::data {

double silence_floor() { return std::log(kLogFloor); }

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

namespace {

std::vector<double> mel_points(const LogMelConfig& cfg) {
  const double lo = hz_to_mel(cfg.fmin);
  const double hi = hz_to_mel(cfg.fmax);
  std::vector<double> hz(static_cast<size_t>(cfg.mel_bins + 2));
  for (int i = 0; i < cfg.mel_bins + 2; ++i) {
    hz[static_cast<size_t>(i)] = mel_to_hz(lo + (hi - lo) * i / (cfg.mel_bins + 1));
  }
  return hz;
}

// Planner calls are not thread-safe in FFTW.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(p);
  }
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

void validate(const LogMelConfig& cfg, int sample_rate) {
  if (cfg.n_fft < 2 || cfg.hop < 1 || cfg.mel_bins < 1) {
    throw InvalidArgument("logmel: n_fft, hop and mel_bins must be positive");
  }
  if (!(cfg.fmin >= 0 && cfg.fmin < cfg.fmax && cfg.fmax <= sample_rate / 2.0)) {
    throw InvalidArgument("logmel: need 0 <= fmin < fmax <= sample_rate / 2");
  }
}

}  // namespace

std::vector<double> mel_centers(const LogMelConfig& cfg) {
  std::vector<double> pts = mel_points(cfg);
  return std::vector<double>(pts.begin() + 1, pts.end() - 1);
}

std::vector<std::vector<double>> mel_filterbank(const LogMelConfig& cfg, int sample_rate) {
  validate(cfg, sample_rate);
  const std::vector<double> pts = mel_points(cfg);
  const int bins = cfg.n_fft / 2 + 1;
  std::vector<std::vector<double>> fb(static_cast<size_t>(cfg.mel_bins),
                                      std::vector<double>(static_cast<size_t>(bins), 0.0));
  for (int m = 0; m < cfg.mel_bins; ++m) {
    const double l = pts[static_cast<size_t>(m)];
    const double c = pts[static_cast<size_t>(m + 1)];
    const double r = pts[static_cast<size_t>(m + 2)];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / cfg.n_fft;
      double w = 0.0;
      if (f > l && f <= c) {
        w = (f - l) / (c - l);
      } else if (f > c && f < r) {
        w = (r - f) / (r - c);
      }
      fb[static_cast<size_t>(m)][static_cast<size_t>(k)] = w;
    }
  }
  return fb;
}

SpectrogramFeature logmel(const AudioClip& clip, const LogMelConfig& cfg) {
  if (clip.sample_rate != kSampleRate) throw InvalidArgument("logmel: clip must be 16 kHz");
  validate(cfg, clip.sample_rate);
  const auto len = static_cast<int64_t>(clip.samples.size());
  if (len < cfg.n_fft) {
    throw InvalidArgument("logmel: clip shorter than one window (" + std::to_string(len) +
                          " < " + std::to_string(cfg.n_fft) + " samples)");
  }
  const int n = cfg.n_fft;
  const int half = n / 2;
  const int bins = n / 2 + 1;

  // Reflect-padded signal.
  std::vector<double> padded(static_cast<size_t>(len + 2 * half));
  for (int64_t i = 0; i < static_cast<int64_t>(padded.size()); ++i) {
    int64_t j = i - half;
    if (j < 0) j = -j;
    if (j >= len) j = 2 * (len - 1) - j;
    padded[static_cast<size_t>(i)] = clip.samples[static_cast<size_t>(j)];
  }
  std::vector<double> window(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    window[static_cast<size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  const auto fb = mel_filterbank(cfg, clip.sample_rate);
  // Sparse filter support for speed.
  std::vector<std::pair<int, int>> support(fb.size());
  for (size_t m = 0; m < fb.size(); ++m) {
    int lo = bins, hi = -1;
    for (int k = 0; k < bins; ++k) {
      if (fb[m][static_cast<size_t>(k)] != 0.0) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
    support[m] = {lo, hi};
  }

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE));
  }
  if (!plan) throw RuntimeError("logmel: FFTW planning failed");

  SpectrogramFeature spec;
  spec.frames = num_frames(len, cfg.hop);
  spec.mel_bins = cfg.mel_bins;
  spec.values.resize(static_cast<size_t>(spec.frames * cfg.mel_bins));
  std::vector<double> power(static_cast<size_t>(bins));
  const double floor = kLogFloor;
  for (int64_t t = 0; t < spec.frames; ++t) {
    const double* src = padded.data() + t * cfg.hop;
    for (int i = 0; i < n; ++i) in.get()[i] = src[i] * window[static_cast<size_t>(i)];
    fftw_execute(plan.get());
    for (int k = 0; k < bins; ++k) {
      const double re = out.get()[k][0];
      const double im = out.get()[k][1];
      power[static_cast<size_t>(k)] = re * re + im * im;
    }
    for (int m = 0; m < cfg.mel_bins; ++m) {
      double e = 0.0;
      const auto [lo, hi] = support[static_cast<size_t>(m)];
      for (int k = lo; k <= hi; ++k) e += fb[static_cast<size_t>(m)][static_cast<size_t>(k)] * power[static_cast<size_t>(k)];
      spec.at(t, m) = std::log(e + floor);
    }
  }
  return spec;
}

AugmentDraw draw_augment(uint64_t seed, int mel_bins, const AugmentConfig& cfg) {
  Rng rng(seed);
  AugmentDraw d;
  d.delta = rng.uniform(cfg.volume_low, cfg.volume_high);
  d.mask_width = static_cast<int>(rng.uniform_int(0, std::min(cfg.max_mask_width, mel_bins)));
  d.mask_start = static_cast<int>(rng.uniform_int(0, mel_bins - d.mask_width));
  return d;
}

void apply_augment(std::vector<double>& values, int mel_bins, const AugmentDraw& draw) {
  if (mel_bins <= 0 || values.size() % static_cast<size_t>(mel_bins) != 0) {
    throw InvalidArgument("augment: values are not a whole number of frames");
  }
  if (draw.mask_width < 0 || draw.mask_start < 0 || draw.mask_start + draw.mask_width > mel_bins) {
    throw InvalidArgument("augment: mask band outside the mel range");
  }
  const double floor = silence_floor();
  const size_t frames = values.size() / static_cast<size_t>(mel_bins);
  for (size_t t = 0; t < frames; ++t) {
    double* row = values.data() + t * static_cast<size_t>(mel_bins);
    if (draw.delta != 0.0) {
      for (int m = 0; m < mel_bins; ++m) row[m] += draw.delta;
    }
    for (int m = draw.mask_start; m < draw.mask_start + draw.mask_width; ++m) row[m] = floor;
  }
}

SpectrogramFeature augment(const SpectrogramFeature& spec, uint64_t seed,
                           const AugmentConfig& cfg) {
  SpectrogramFeature out = spec;
  apply_augment(out.values, out.mel_bins, draw_augment(seed, spec.mel_bins, cfg));
  return out;
}

}  // namespace nasvad::data
