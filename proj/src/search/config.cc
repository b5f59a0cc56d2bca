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

#include "search/config.h"

#include <filesystem>
#include <fstream>

#include "common/error.h"

namespace nasvad::search {

namespace fs = std::filesystem;

namespace {

std::string evaluator_name(EvaluatorKind k) {
  return k == EvaluatorKind::kTrain ? "train" : "attention_count";
}

template <typename T>
T as(const nlohmann::json& v, const std::string& field) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError("config field '" + field + "' has the wrong type");
  }
}

AcquisitionConfig acquisition_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("config field 'acquisition' must be an object");
  AcquisitionConfig a;
  for (const auto& [key, v] : doc.items()) {
    const std::string f = "acquisition." + key;
    if (key == "exploration_margin") {
      a.exploration_margin = as<double>(v, f);
    } else if (key == "pool_size") {
      a.pool_size = as<int>(v, f);
    } else if (key == "mutation_fraction") {
      a.mutation_fraction = as<double>(v, f);
    } else if (key == "batch_size") {
      a.batch_size = as<int>(v, f);
    } else if (key == "wl_depth") {
      a.wl_depth = as<int>(v, f);
    } else if (key == "allowed_ops") {
      a.allowed_ops.clear();
      for (const auto& name : as<std::vector<std::string>>(v, f)) {
        auto op = op_from_name(name);
        if (!op) throw SchemaError("config field '" + f + "': unknown operation '" + name + "'");
        a.allowed_ops.push_back(*op);
      }
    } else {
      throw SchemaError("unknown config field '" + f + "'");
    }
  }
  return a;
}

}  // namespace

void SearchConfig::validate() const {
  if (total_evaluations <= 0) throw SchemaError("total_evaluations must be positive");
  if (initial_random <= 0) throw SchemaError("initial_random must be positive");
  if (initial_random > total_evaluations) {
    throw SchemaError("initial_random (" + std::to_string(initial_random) +
                      ") must not exceed total_evaluations (" +
                      std::to_string(total_evaluations) + ")");
  }
  if (evaluator == EvaluatorKind::kTrain && data_dir.empty()) {
    throw SchemaError("data_dir is required for the train evaluator");
  }
  try {
    acquisition.validate();
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  train.validate();
  ArchSpec probe = macro;
  probe.cell = reference_cell();
  ValidationReport r = validate_arch(probe);
  if (!r.ok) throw SchemaError("macro: " + r.to_string());
}

nlohmann::json search_config_to_json(const SearchConfig& cfg) {
  std::vector<std::string> ops;
  for (OpKind k : cfg.acquisition.allowed_ops) ops.emplace_back(op_name(k));
  return {{"total_evaluations", cfg.total_evaluations},
          {"initial_random", cfg.initial_random},
          {"seed", cfg.seed},
          {"data_dir", cfg.data_dir},
          {"evaluator", evaluator_name(cfg.evaluator)},
          {"acquisition",
           {{"exploration_margin", cfg.acquisition.exploration_margin},
            {"pool_size", cfg.acquisition.pool_size},
            {"mutation_fraction", cfg.acquisition.mutation_fraction},
            {"batch_size", cfg.acquisition.batch_size},
            {"wl_depth", cfg.acquisition.wl_depth},
            {"allowed_ops", ops}}},
          {"train", nn::train_config_to_json(cfg.train)},
          {"macro",
           {{"base_channels", cfg.macro.base_channels},
            {"num_cells", cfg.macro.num_cells},
            {"reduction_index", cfg.macro.reduction_index},
            {"input_mel_bins", cfg.macro.input_mel_bins},
            {"window_frames", cfg.macro.window_frames},
            {"target_offsets", cfg.macro.target_offsets}}}};
}

SearchConfig search_config_from_json(const nlohmann::json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw SchemaError("search config must be a JSON object");
  SearchConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "total_evaluations") {
      cfg.total_evaluations = as<int>(v, key);
    } else if (key == "initial_random") {
      cfg.initial_random = as<int>(v, key);
    } else if (key == "seed") {
      cfg.seed = as<uint64_t>(v, key);
    } else if (key == "data_dir") {
      cfg.data_dir = as<std::string>(v, key);
    } else if (key == "evaluator") {
      const auto name = as<std::string>(v, key);
      if (name == "train") {
        cfg.evaluator = EvaluatorKind::kTrain;
      } else if (name == "attention_count") {
        cfg.evaluator = EvaluatorKind::kAttentionCount;
      } else {
        throw SchemaError("config field 'evaluator': unknown evaluator '" + name + "'");
      }
    } else if (key == "acquisition") {
      cfg.acquisition = acquisition_from_json(v);
    } else if (key == "train") {
      cfg.train = nn::train_config_from_json(v);
    } else if (key == "macro") {
      if (!v.is_object()) throw SchemaError("config field 'macro' must be an object");
      for (const auto& [mk, mv] : v.items()) {
        const std::string f = "macro." + mk;
        if (mk == "base_channels") {
          cfg.macro.base_channels = as<int>(mv, f);
        } else if (mk == "num_cells") {
          cfg.macro.num_cells = as<int>(mv, f);
        } else if (mk == "reduction_index") {
          cfg.macro.reduction_index = as<int>(mv, f);
        } else if (mk == "input_mel_bins") {
          cfg.macro.input_mel_bins = as<int>(mv, f);
        } else if (mk == "window_frames") {
          cfg.macro.window_frames = as<int>(mv, f);
        } else if (mk == "target_offsets") {
          cfg.macro.target_offsets = as<std::vector<int>>(mv, f);
        } else {
          throw SchemaError("unknown config field '" + f + "'");
        }
      }
    } else {
      throw SchemaError("unknown config field '" + key + "'");
    }
  }
  if (!cfg.data_dir.empty() && !base_dir.empty() && fs::path(cfg.data_dir).is_relative()) {
    cfg.data_dir = (fs::path(base_dir) / cfg.data_dir).lexically_normal().string();
  }
  cfg.validate();
  return cfg;
}

SearchConfig load_search_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open search config: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return search_config_from_json(doc, fs::path(path).parent_path().string());
}

}  // namespace nasvad::search
