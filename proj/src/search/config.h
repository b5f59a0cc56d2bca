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

#ifndef NASVAD_SEARCH_CONFIG_H_
#define NASVAD_SEARCH_CONFIG_H_

#include <cstdint>
#include <string>

#include <json.hpp>

#include "arch/arch_spec.h"
#include "nn/train.h"
#include "surrogate/acquisition.h"

namespace nasvad::search {

enum class EvaluatorKind {
  kTrain,           // train on the dataset, score = validation AUC
  kAttentionCount,  // cheap benchmark: attention edges / 6, no training
};

struct SearchConfig {
  int total_evaluations = 30;
  int initial_random = 10;
  uint64_t seed = 0;
  std::string data_dir;
  EvaluatorKind evaluator = EvaluatorKind::kTrain;
  AcquisitionConfig acquisition;
  nn::TrainConfig train;
  // Macro skeleton every candidate cell is placed in; its cell is ignored.
  ArchSpec macro;

  // Throws SchemaError with the offending field name.
  void validate() const;
};

nlohmann::json search_config_to_json(const SearchConfig& cfg);
// Unknown fields are errors. A relative data_dir is resolved against
// `base_dir` when that is non-empty.
SearchConfig search_config_from_json(const nlohmann::json& doc, const std::string& base_dir = "");
SearchConfig load_search_config(const std::string& path);

}  // namespace nasvad::search

#endif  // NASVAD_SEARCH_CONFIG_H_
