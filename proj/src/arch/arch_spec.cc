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

#include "arch/arch_spec.h"

#include <fstream>
#include <sstream>

#include "common/error.h"

namespace nasvad {

using nlohmann::json;

ValidationReport validate_arch(const ArchSpec& arch) {
  ValidationReport report = validate_cell(arch.cell);
  auto fail = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  if (arch.base_channels <= 0 || arch.base_channels % 4 != 0) {
    fail("base_channels must be a positive multiple of 4, got " +
         std::to_string(arch.base_channels));
  }
  if (arch.num_cells <= 0) fail("num_cells must be positive");
  if (arch.reduction_index < 1 || arch.reduction_index > arch.num_cells) {
    fail("reduction_index must lie in [1, num_cells], got " +
         std::to_string(arch.reduction_index));
  }
  if (arch.input_mel_bins <= 0) fail("input_mel_bins must be positive");
  if (arch.window_frames <= 0) fail("window_frames must be positive");
  if (arch.target_offsets.empty()) fail("target_offsets must not be empty");
  return report;
}

ArchSpec reference_arch() {
  ArchSpec arch;
  arch.cell = reference_cell();
  return arch;
}

json arch_to_json(const ArchSpec& arch) {
  json nodes = json::array();
  for (int n = 0; n < kNumCellNodes; ++n) {
    nodes.push_back(n < kNumInputNodes ? node_name(n) : std::string("ADD"));
  }
  json edges = json::array();
  for (const CellEdge& e : arch.cell.edges) {
    edges.push_back(json::array({e.source, e.target, std::string(op_name(e.op))}));
  }
  json doc;
  doc["format_version"] = kArchFormatVersion;
  doc["cell"] = {{"nodes", nodes}, {"edges", edges}};
  doc["base_channels"] = arch.base_channels;
  doc["num_cells"] = arch.num_cells;
  doc["reduction_index"] = arch.reduction_index;
  doc["input_mel_bins"] = arch.input_mel_bins;
  doc["window_frames"] = arch.window_frames;
  doc["target_offsets"] = arch.target_offsets;
  return doc;
}

namespace {

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(std::string("architecture document: missing field '") + key + "'");
  }
  return obj.at(key);
}

int require_int(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer()) {
    throw SchemaError(std::string("architecture document: field '") + key +
                      "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

ArchSpec arch_from_json(const json& doc) {
  const int version = require_int(doc, "format_version");
  if (version != kArchFormatVersion) {
    throw SchemaError("architecture document: unsupported format_version " +
                      std::to_string(version));
  }
  ArchSpec arch;
  const json& cell = require(doc, "cell");
  const json& nodes = require(cell, "nodes");
  const json expected_nodes = arch_to_json(ArchSpec{}).at("cell").at("nodes");
  if (nodes != expected_nodes) {
    throw SchemaError("architecture document: cell.nodes must be " + expected_nodes.dump());
  }
  const json& edges = require(cell, "edges");
  if (!edges.is_array()) throw SchemaError("architecture document: cell.edges must be an array");
  for (size_t i = 0; i < edges.size(); ++i) {
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_string()) {
      throw SchemaError("architecture document: edge " + std::to_string(i) +
                        " must be [source, target, op]");
    }
    const std::string name = e[2].get<std::string>();
    auto op = op_from_name(name);
    if (!op) {
      throw SchemaError("architecture document: unknown operation '" + name + "' in edge " +
                        std::to_string(i));
    }
    arch.cell.edges.push_back({e[0].get<int>(), e[1].get<int>(), *op});
  }
  arch.base_channels = require_int(doc, "base_channels");
  arch.num_cells = require_int(doc, "num_cells");
  arch.reduction_index = require_int(doc, "reduction_index");
  arch.input_mel_bins = require_int(doc, "input_mel_bins");
  arch.window_frames = require_int(doc, "window_frames");
  const json& offsets = require(doc, "target_offsets");
  if (!offsets.is_array()) {
    throw SchemaError("architecture document: target_offsets must be an array");
  }
  arch.target_offsets.clear();
  for (const json& o : offsets) {
    if (!o.is_number_integer()) {
      throw SchemaError("architecture document: target_offsets must hold integers");
    }
    arch.target_offsets.push_back(o.get<int>());
  }

  ValidationReport report = validate_arch(arch);
  if (!report.ok) {
    throw SchemaError("architecture document failed validation:\n" + report.to_string());
  }
  return arch;
}

std::string serialize_arch(const ArchSpec& arch) {
  ValidationReport report = validate_arch(arch);
  if (!report.ok) {
    throw InvalidArgument("serialize_arch: invalid architecture:\n" + report.to_string());
  }
  return arch_to_json(arch).dump(2) + "\n";
}

ArchSpec deserialize_arch(std::string_view document) {
  json doc = json::parse(document.begin(), document.end(), nullptr, false);
  if (doc.is_discarded()) throw SchemaError("architecture document: malformed JSON");
  return arch_from_json(doc);
}

ArchSpec load_arch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open architecture file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_arch(ss.str());
}

void save_arch(const ArchSpec& arch, const std::string& path) {
  const std::string text = serialize_arch(arch);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write architecture file: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace nasvad
