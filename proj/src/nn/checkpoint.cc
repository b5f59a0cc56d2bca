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

#include "nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "common/error.h"

namespace nasvad::nn {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

namespace {

constexpr char kMagic[8] = {'N', 'V', 'A', 'D', 'C', 'K', 'P', 'T'};

struct Entry {
  std::string name;
  std::string kind;
  const Tensor* tensor;
};

std::vector<Entry> entries(const VadModel& model) {
  std::vector<Entry> out;
  for (const NamedParameter& p : model.store().parameters()) {
    out.push_back({p.name, "parameter", &p.var.value()});
  }
  for (const NamedBuffer& b : model.store().buffers()) out.push_back({b.name, "buffer", b.tensor});
  return out;
}

}  // namespace

void save_checkpoint(const VadModel& model, const std::string& path, const nlohmann::json& extra) {
  nlohmann::json tensors = nlohmann::json::array();
  uint64_t offset = 0;
  const std::vector<Entry> list = entries(model);
  for (const Entry& e : list) {
    tensors.push_back({{"name", e.name},
                       {"kind", e.kind},
                       {"shape", e.tensor->shape()},
                       {"offset", offset}});
    offset += static_cast<uint64_t>(e.tensor->numel());
  }
  nlohmann::json header = {{"arch", arch_to_json(model.arch())},
                           {"seed", model.seed()},
                           {"param_count", count_params(model)},
                           {"tensors", tensors},
                           {"extra", extra}};
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  const uint32_t version = kCheckpointVersion;
  const uint64_t len = text.size();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(len));
  for (const Entry& e : list) {
    out.write(reinterpret_cast<const char*>(e.tensor->data()),
              static_cast<std::streamsize>(e.tensor->numel() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  uint32_t version = 0;
  uint64_t len = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw SchemaError(path + ": not a checkpoint file");
  }
  if (version != kCheckpointVersion) {
    throw SchemaError(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  if (len > (1ULL << 30)) throw SchemaError(path + ": implausible header length");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw SchemaError(path + ": truncated header");

  LoadedCheckpoint out;
  try {
    out.header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": bad header: " + e.what());
  }
  if (!out.header.contains("arch") || !out.header.contains("seed") ||
      !out.header.contains("tensors")) {
    throw SchemaError(path + ": header lacks arch, seed or tensors");
  }
  const ArchSpec arch = arch_from_json(out.header["arch"]);
  out.model = build_model(arch, out.header["seed"].get<uint64_t>());

  std::map<std::string, Tensor*> slots;
  for (const NamedParameter& p : out.model->store().parameters()) {
    Var v = p.var;
    slots[p.name] = &v.mutable_value();
  }
  for (const NamedBuffer& b : out.model->store().buffers()) slots[b.name] = b.tensor;

  const auto payload_start = in.tellg();
  size_t filled = 0;
  for (const nlohmann::json& t : out.header["tensors"]) {
    const std::string name = t.at("name").get<std::string>();
    auto it = slots.find(name);
    if (it == slots.end()) throw SchemaError(path + ": unknown tensor '" + name + "'");
    const Shape shape = t.at("shape").get<Shape>();
    if (shape != it->second->shape()) {
      throw SchemaError(path + ": tensor '" + name + "' has shape " + shape_str(shape) +
                        ", model expects " + shape_str(it->second->shape()));
    }
    const uint64_t offset = t.at("offset").get<uint64_t>();
    in.seekg(payload_start + static_cast<std::streamoff>(offset * sizeof(double)));
    in.read(reinterpret_cast<char*>(it->second->data()),
            static_cast<std::streamsize>(it->second->numel() * sizeof(double)));
    if (!in) throw SchemaError(path + ": truncated payload for '" + name + "'");
    ++filled;
  }
  if (filled != slots.size()) throw SchemaError(path + ": checkpoint is missing tensors");
  return out;
}

}  // namespace nasvad::nn
