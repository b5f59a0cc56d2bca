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

#include "data/dataset.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "common/error.h"
#include "common/parallel.h"
#include "common/rng.h"
#include "data/synth.h"

namespace nasvad::data {

static_assert(std::endian::native == std::endian::little, "record I/O assumes little endian");

namespace fs = std::filesystem;

namespace {

constexpr char kRecordMagic[8] = {'N', 'V', 'A', 'D', 'R', 'E', 'C', '1'};

std::string clip_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "clip_%04d", index);
  return buf;
}

nlohmann::json meta_to_json(const ClipMeta& m) {
  return {{"name", m.name},
          {"file", m.name + ".rec"},
          {"speech_seed", m.speech_seed},
          {"noise_seed", m.noise_seed},
          {"noise_kind", m.noise_kind},
          {"snr_db", m.snr_db},
          {"frames", m.frames},
          {"speech_frames", m.speech_frames},
          {"pad_head_frames", m.pad_head_frames},
          {"pad_tail_frames", m.pad_tail_frames},
          {"clipped_samples", m.clipped_samples}};
}

template <typename T>
T get_field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(where + ": field '" + key + "' has the wrong type");
  }
}

std::vector<std::string> names_of(const std::vector<size_t>& idx, const std::vector<ClipData>& clips) {
  std::vector<std::string> out;
  for (size_t i : idx) out.push_back(clips[i].meta.name);
  return out;
}

nlohmann::json build_manifest(const Dataset& ds) {
  const SynthDataConfig& c = ds.config;
  nlohmann::json items = nlohmann::json::array();
  for (const ClipData& clip : ds.clips) items.push_back(meta_to_json(clip.meta));
  return {{"format_version", kDatasetFormatVersion},
          {"generator", "synthetic"},
          {"seed", c.seed},
          {"clips", c.clips},
          {"duration_s", c.duration_s},
          {"snr_low_db", c.mix.snr_low_db},
          {"snr_high_db", c.mix.snr_high_db},
          {"feature",
           {{"n_fft", c.feature.n_fft},
            {"hop", c.feature.hop},
            {"mel_bins", c.feature.mel_bins},
            {"fmin", c.feature.fmin},
            {"fmax", c.feature.fmax},
            {"log_floor", kLogFloor}}},
          {"split",
           {{"seed", derive_seed(c.seed, 7)},
            {"ratios", {8, 1, 1}},
            {"train", names_of(ds.split.train, ds.clips)},
            {"val", names_of(ds.split.val, ds.clips)},
            {"test", names_of(ds.split.test, ds.clips)}}},
          {"items", items}};
}

}  // namespace

void SynthDataConfig::validate() const {
  if (clips < 3) throw SchemaError("clips must be at least 3 (train/val/test split)");
  if (!(duration_s >= 1.0)) throw SchemaError("duration_s must be at least 1 second");
  mix.validate();
}

ClipData synth_clip(const SynthDataConfig& cfg, int index) {
  const auto i = static_cast<uint64_t>(index);
  ClipData out;
  out.meta.name = clip_name(index);
  out.meta.speech_seed = derive_seed(cfg.seed, 1, i);
  out.meta.noise_seed = derive_seed(cfg.seed, 2, i);
  Rng draw(derive_seed(cfg.seed, 3, i));
  const auto kind = static_cast<NoiseKind>(draw.uniform_index(3));
  out.meta.noise_kind = noise_kind_name(kind);
  out.meta.snr_db = draw.uniform(cfg.mix.snr_low_db, cfg.mix.snr_high_db);

  SpeechSurrogate speech = synth_speech(out.meta.speech_seed, cfg.duration_s);
  PadResult padded = pad_balance(speech.clip, speech.labels, derive_seed(cfg.seed, 4, i));
  AudioClip noise = synth_noise_samples(out.meta.noise_seed,
                                        static_cast<int64_t>(padded.clip.samples.size()), kind);
  MixResult mixed = mix_at_snr(padded.clip, padded.labels, noise, out.meta.snr_db,
                               derive_seed(cfg.seed, 5, i));
  out.features = logmel(mixed.mixture, cfg.feature);
  out.labels = padded.labels;
  out.meta.frames = out.features.frames;
  out.meta.speech_frames = out.labels.speech_frames();
  out.meta.pad_head_frames = padded.head_frames;
  out.meta.pad_tail_frames = padded.tail_frames;
  out.meta.clipped_samples = mixed.clipped;
  return out;
}

Dataset synth_dataset(const SynthDataConfig& cfg, int jobs) {
  cfg.validate();
  Dataset ds;
  ds.config = cfg;
  ds.clips.resize(static_cast<size_t>(cfg.clips));
  parallel_for(ds.clips.size(), jobs,
               [&](size_t i) { ds.clips[i] = synth_clip(cfg, static_cast<int>(i)); });
  ds.split = split_dataset(ds.clips.size(), derive_seed(cfg.seed, 7));
  ds.manifest = build_manifest(ds);
  return ds;
}

void write_record(const ClipData& clip, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write record: " + path);
  const auto frames = static_cast<uint64_t>(clip.features.frames);
  const auto mel = static_cast<uint32_t>(clip.features.mel_bins);
  out.write(kRecordMagic, sizeof(kRecordMagic));
  out.write(reinterpret_cast<const char*>(&frames), sizeof(frames));
  out.write(reinterpret_cast<const char*>(&mel), sizeof(mel));
  out.write(reinterpret_cast<const char*>(clip.features.values.data()),
            static_cast<std::streamsize>(clip.features.values.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(clip.labels.labels.data()),
            static_cast<std::streamsize>(clip.labels.labels.size()));
  if (!out) throw IoError("failed writing record: " + path);
}

ClipData read_record(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open record: " + path);
  char magic[8];
  uint64_t frames = 0;
  uint32_t mel = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&frames), sizeof(frames));
  in.read(reinterpret_cast<char*>(&mel), sizeof(mel));
  if (!in || std::memcmp(magic, kRecordMagic, sizeof(magic)) != 0) {
    throw SchemaError(path + ": not a feature record");
  }
  if (frames == 0 || mel == 0 || frames > (1ULL << 32) || mel > 4096) {
    throw SchemaError(path + ": implausible record header");
  }
  ClipData clip;
  clip.features.frames = static_cast<int64_t>(frames);
  clip.features.mel_bins = static_cast<int>(mel);
  clip.features.values.resize(frames * mel);
  clip.labels.labels.resize(frames);
  in.read(reinterpret_cast<char*>(clip.features.values.data()),
          static_cast<std::streamsize>(frames * mel * sizeof(double)));
  in.read(reinterpret_cast<char*>(clip.labels.labels.data()), static_cast<std::streamsize>(frames));
  if (!in) throw SchemaError(path + ": truncated record");
  for (uint8_t l : clip.labels.labels) {
    if (l > 1) throw SchemaError(path + ": label values must be 0 or 1");
  }
  return clip;
}

void save_dataset(const Dataset& ds, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create dataset directory " + dir + ": " + ec.message());
  for (const ClipData& clip : ds.clips) {
    write_record(clip, (fs::path(dir) / (clip.meta.name + ".rec")).string());
  }
  const std::string path = (fs::path(dir) / "manifest.json").string();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << ds.manifest.dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest: " + path);
}

Dataset load_dataset(const std::string& dir) {
  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open dataset manifest: " + manifest_path.string());
  Dataset ds;
  try {
    ds.manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(manifest_path.string() + ": " + e.what());
  }
  const std::string where = manifest_path.string();
  const nlohmann::json& m = ds.manifest;
  if (get_field<int>(m, "format_version", where) != kDatasetFormatVersion) {
    throw SchemaError(where + ": unsupported format_version");
  }
  SynthDataConfig& c = ds.config;
  c.seed = get_field<uint64_t>(m, "seed", where);
  c.clips = get_field<int>(m, "clips", where);
  c.duration_s = get_field<double>(m, "duration_s", where);
  c.mix.snr_low_db = get_field<double>(m, "snr_low_db", where);
  c.mix.snr_high_db = get_field<double>(m, "snr_high_db", where);
  const nlohmann::json feature = get_field<nlohmann::json>(m, "feature", where);
  c.feature.n_fft = get_field<int>(feature, "n_fft", where + ": feature");
  c.feature.hop = get_field<int>(feature, "hop", where + ": feature");
  c.feature.mel_bins = get_field<int>(feature, "mel_bins", where + ": feature");
  c.feature.fmin = get_field<double>(feature, "fmin", where + ": feature");
  c.feature.fmax = get_field<double>(feature, "fmax", where + ": feature");

  std::map<std::string, size_t> index;
  for (const nlohmann::json& item : get_field<nlohmann::json>(m, "items", where)) {
    ClipMeta meta;
    meta.name = get_field<std::string>(item, "name", where + ": item");
    const std::string file = get_field<std::string>(item, "file", where + ": item");
    meta.speech_seed = get_field<uint64_t>(item, "speech_seed", where + ": item");
    meta.noise_seed = get_field<uint64_t>(item, "noise_seed", where + ": item");
    meta.noise_kind = get_field<std::string>(item, "noise_kind", where + ": item");
    meta.snr_db = get_field<double>(item, "snr_db", where + ": item");
    meta.frames = get_field<int64_t>(item, "frames", where + ": item");
    meta.speech_frames = get_field<int64_t>(item, "speech_frames", where + ": item");
    meta.pad_head_frames = get_field<int64_t>(item, "pad_head_frames", where + ": item");
    meta.pad_tail_frames = get_field<int64_t>(item, "pad_tail_frames", where + ": item");
    meta.clipped_samples = get_field<int64_t>(item, "clipped_samples", where + ": item");
    ClipData clip = read_record((fs::path(dir) / file).string());
    if (clip.features.frames != meta.frames || clip.features.mel_bins != c.feature.mel_bins) {
      throw SchemaError(file + ": record shape disagrees with the manifest");
    }
    clip.meta = meta;
    index[meta.name] = ds.clips.size();
    ds.clips.push_back(std::move(clip));
  }
  const nlohmann::json split = get_field<nlohmann::json>(m, "split", where);
  auto resolve = [&](const char* key) {
    std::vector<size_t> out;
    for (const auto& name : get_field<std::vector<std::string>>(split, key, where + ": split")) {
      auto it = index.find(name);
      if (it == index.end()) throw SchemaError(where + ": split names unknown clip '" + name + "'");
      out.push_back(it->second);
    }
    return out;
  };
  ds.split.train = resolve("train");
  ds.split.val = resolve("val");
  ds.split.test = resolve("test");
  return ds;
}

namespace {

ExampleSet make_set(const Dataset& ds, const std::vector<size_t>& idx, int window_frames,
                    const std::vector<int>& offsets) {
  ExampleSet set;
  set.window_frames = window_frames;
  set.mel_bins = ds.config.feature.mel_bins;
  set.offsets = offsets;
  for (size_t i : idx) {
    const ClipData& clip = ds.clips[i];
    add_clip(set, clip.meta.name, clip.features, clip.labels);
  }
  return set;
}

}  // namespace

ExampleSet examples_for_split(const Dataset& ds, const std::string& split, int window_frames,
                              const std::vector<int>& offsets) {
  if (split == "train") return make_set(ds, ds.split.train, window_frames, offsets);
  if (split == "val") return make_set(ds, ds.split.val, window_frames, offsets);
  if (split == "test") return make_set(ds, ds.split.test, window_frames, offsets);
  throw InvalidArgument("unknown split '" + split + "'");
}

ExampleSet examples_for_all(const Dataset& ds, int window_frames, const std::vector<int>& offsets) {
  std::vector<size_t> all(ds.clips.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return make_set(ds, all, window_frames, offsets);
}

}  // namespace nasvad::data
