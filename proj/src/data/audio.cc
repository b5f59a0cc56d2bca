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

#include "data/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/error.h"
#include "common/logging.h"

namespace nasvad::data {

int64_t LabelTrack::speech_frames() const {
  return std::count(labels.begin(), labels.end(), uint8_t{1});
}

int64_t LabelTrack::nonspeech_frames() const {
  return static_cast<int64_t>(labels.size()) - speech_frames();
}

int64_t num_frames(int64_t num_samples, int hop) { return num_samples / hop + 1; }

LabelTrack rasterize_segments(const std::vector<Segment>& segments, int64_t frames, int hop,
                              int sample_rate) {
  LabelTrack track;
  track.frame_hop = hop;
  track.labels.assign(static_cast<size_t>(frames), 0);
  for (int64_t f = 0; f < frames; ++f) {
    const double center = (static_cast<double>(f) + 0.5) * hop / sample_rate;
    for (const Segment& s : segments) {
      if (center >= s.start_s && center < s.end_s) {
        track.labels[static_cast<size_t>(f)] = 1;
        break;
      }
    }
  }
  return track;
}

namespace {

uint32_t read_u32(const char* p) {
  return static_cast<uint32_t>(static_cast<uint8_t>(p[0])) |
         static_cast<uint32_t>(static_cast<uint8_t>(p[1])) << 8 |
         static_cast<uint32_t>(static_cast<uint8_t>(p[2])) << 16 |
         static_cast<uint32_t>(static_cast<uint8_t>(p[3])) << 24;
}
uint16_t read_u16(const char* p) {
  return static_cast<uint16_t>(static_cast<uint8_t>(p[0]) | static_cast<uint8_t>(p[1]) << 8);
}
void put_u32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0) {
    throw SchemaError(path + ": not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const uint32_t size = read_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + size > bytes.size()) throw SchemaError(path + ": truncated chunk '" + id + "'");
    if (id == "fmt ") {
      if (size < 16) throw SchemaError(path + ": short fmt chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw SchemaError(path + ": data chunk before fmt chunk");
      if (format != 1) throw SchemaError(path + ": unsupported format (PCM only)");
      if (rate != kSampleRate) {
        throw SchemaError(path + ": unsupported sample rate " + std::to_string(rate) +
                          " (need 16000)");
      }
      if (channels != 1) {
        throw SchemaError(path + ": unsupported channel count " + std::to_string(channels));
      }
      if (bits != 16) {
        throw SchemaError(path + ": unsupported bit depth " + std::to_string(bits));
      }
      AudioClip clip;
      clip.samples.resize(size / 2);
      for (size_t i = 0; i < clip.samples.size(); ++i) {
        const auto v = static_cast<int16_t>(read_u16(bytes.data() + body + 2 * i));
        clip.samples[i] = v / 32768.0;
      }
      if (clip.samples.empty()) throw SchemaError(path + ": empty data chunk");
      return clip;
    }
    pos = body + size + (size & 1);
  }
  throw SchemaError(path + ": no data chunk");
}

void write_wav(const AudioClip& clip, const std::string& path) {
  if (clip.sample_rate != kSampleRate) throw InvalidArgument("write_wav: sample rate must be 16000");
  const auto data_bytes = static_cast<uint32_t>(clip.samples.size() * 2);
  std::string out = "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, kSampleRate);
  put_u32(out, kSampleRate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double s : clip.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<int16_t>(std::clamp(std::lround(c * 32768.0), -32768L, 32767L));
    put_u16(out, static_cast<uint16_t>(v));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write WAV file: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("failed writing WAV file: " + path);
}

std::vector<Segment> parse_label_lines(const std::string& text) {
  std::vector<Segment> segs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Segment s{};
    std::string extra;
    if (!(ls >> s.start_s >> s.end_s) || (ls >> extra) || !std::isfinite(s.start_s) ||
        !std::isfinite(s.end_s) || s.start_s < 0 || s.end_s < s.start_s) {
      throw SchemaError("malformed label line " + std::to_string(lineno) + ": '" + line + "'");
    }
    segs.push_back(s);
  }
  return segs;
}

LabelTrack read_labels(const std::string& path, int64_t num_samples, int hop) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return rasterize_segments(parse_label_lines(ss.str()), num_frames(num_samples, hop), hop);
}

int64_t clip_samples(std::vector<double>& samples) {
  int64_t n = 0;
  for (double& s : samples) {
    if (s > 1.0) {
      s = 1.0;
      ++n;
    } else if (s < -1.0) {
      s = -1.0;
      ++n;
    }
  }
  if (n > 0) NASVAD_LOG(kInfo, "clipped " << n << " samples to [-1, 1]");
  return n;
}

}  // namespace nasvad::data
