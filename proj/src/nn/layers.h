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

#ifndef NASVAD_NN_LAYERS_H_
#define NASVAD_NN_LAYERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "common/rng.h"
#include "nn/ops.h"

namespace nasvad::nn {

struct NamedParameter {
  std::string name;
  Var var;
};

// Non-learnable state saved with a model (batch-norm running statistics).
struct NamedBuffer {
  std::string name;
  Tensor* tensor;
};

// Owns the learnable tensors of a model in creation order. Buffers point into
// layer objects, which must outlive the store's use.
class ParameterStore {
 public:
  Var add_parameter(std::string name, Tensor init);
  void add_buffer(std::string name, Tensor* tensor);

  const std::vector<NamedParameter>& parameters() const { return params_; }
  const std::vector<NamedBuffer>& buffers() const { return buffers_; }

  // Learnable scalars.
  int64_t count() const;
  void zero_grad();

 private:
  std::vector<NamedParameter> params_;
  std::vector<NamedBuffer> buffers_;
};

// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), drawn in
// construction order from one seeded stream.
class Initializer {
 public:
  explicit Initializer(uint64_t seed) : rng_(seed) {}
  Tensor uniform(const Shape& shape, int64_t fan_in);

 private:
  Rng rng_;
};

class Conv2d {
 public:
  Conv2d(ParameterStore& store, Initializer& init, const std::string& name, int in, int out,
         int kernel, bool depthwise, bool bias);
  Var forward(const Var& x) const;
  void zero_init();

 private:
  Var weight_;
  Var bias_;
  int groups_;
};

class BatchNorm2d {
 public:
  BatchNorm2d(ParameterStore& store, const std::string& name, int channels);
  BatchNorm2d(const BatchNorm2d&) = delete;
  BatchNorm2d& operator=(const BatchNorm2d&) = delete;
  Var forward(const Var& x, bool training);

 private:
  Var gamma_;
  Var beta_;
  BatchNormState state_;
};

class LayerNormChannels {
 public:
  LayerNormChannels(ParameterStore& store, const std::string& name, int channels);
  Var forward(const Var& x) const;

 private:
  Var gamma_;
  Var beta_;
};

class Linear {
 public:
  Linear(ParameterStore& store, Initializer& init, const std::string& name, int in, int out,
         bool bias = true);
  Var forward(const Var& x) const;

 private:
  Var weight_;
  Var bias_;
};

}  // namespace nasvad::nn

#endif  // NASVAD_NN_LAYERS_H_
