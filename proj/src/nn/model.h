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

#ifndef NASVAD_NN_MODEL_H_
#define NASVAD_NN_MODEL_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "arch/arch_spec.h"
#include "nn/layers.h"
#include "nn/search_ops.h"

namespace nasvad::nn {

// Working geometry of one cell slot: channel width and feature width inside
// the cell; the cell emits 3 * channels after concatenation.
struct CellGeometry {
  int channels = 0;
  int features = 0;
  bool reduction = false;
};

// Shapes observed during one forward pass.
struct ForwardTrace {
  Shape stem;
  std::vector<Shape> cell_inputs_prev;       // port IN1 after preprocess
  std::vector<Shape> cell_inputs_prev_prev;  // port IN2 after preprocess
  std::vector<Shape> cell_outputs;
  Shape logits;
};

class CellModule;
class PortPreprocess;

// Stem (two 3x3 conv + BN + GELU) -> num_cells cells, each fed by the two
// previous outputs through a port preprocess -> per-time-step linear head.
class VadModel {
 public:
  VadModel(const ArchSpec& arch, uint64_t seed, const InitOptions& options = {});
  ~VadModel();
  VadModel(const VadModel&) = delete;
  VadModel& operator=(const VadModel&) = delete;

  // input: (B, 1, T, input_mel_bins) -> logits (B, T, |target_offsets|).
  Var forward(const Var& input, bool training, ForwardTrace* trace = nullptr);

  // Eval-mode probabilities, no graph recorded.
  Tensor predict(const Tensor& input);

  const ArchSpec& arch() const { return arch_; }
  uint64_t seed() const { return seed_; }
  ParameterStore& store() { return store_; }
  const ParameterStore& store() const { return store_; }
  const std::vector<CellGeometry>& geometry() const { return geometry_; }

 private:
  ArchSpec arch_;
  uint64_t seed_;
  ParameterStore store_;
  std::unique_ptr<Conv2d> stem_conv1_;
  std::unique_ptr<BatchNorm2d> stem_bn1_;
  std::unique_ptr<Conv2d> stem_conv2_;
  std::unique_ptr<BatchNorm2d> stem_bn2_;
  std::vector<std::unique_ptr<PortPreprocess>> pre_prev_;
  std::vector<std::unique_ptr<PortPreprocess>> pre_prev_prev_;
  std::vector<std::unique_ptr<CellModule>> cells_;
  std::vector<CellGeometry> geometry_;
  Var head_weight_;
  Var head_bias_;
};

// Validates the arch (throws SchemaError with the report) and builds.
std::unique_ptr<VadModel> build_model(const ArchSpec& arch, uint64_t seed,
                                      const InitOptions& options = {});

int64_t count_params(const VadModel& model);

// Geometry of every cell slot without building the model.
std::vector<CellGeometry> cell_geometry(const ArchSpec& arch);

}  // namespace nasvad::nn

#endif  // NASVAD_NN_MODEL_H_
