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

#ifndef NASVAD_NN_CHECKPOINT_H_
#define NASVAD_NN_CHECKPOINT_H_

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "nn/model.h"

namespace nasvad::nn {

inline constexpr uint32_t kCheckpointVersion = 1;

// Layout (little endian):
//   8 bytes  "NVADCKPT"
//   uint32   version
//   uint64   header length n
//   n bytes  JSON header {arch, seed, tensors: [{name, kind, shape, offset}]}
//   float64 payload, tensors back to back in manifest order
void save_checkpoint(const VadModel& model, const std::string& path,
                     const nlohmann::json& extra = nlohmann::json::object());

struct LoadedCheckpoint {
  std::unique_ptr<VadModel> model;
  nlohmann::json header;
};

// Rebuilds the model from the embedded arch and seed, then overwrites every
// tensor. Missing or misshaped tensors are schema errors.
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace nasvad::nn

#endif  // NASVAD_NN_CHECKPOINT_H_
