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

#include "nn/layers.h"

#include <cmath>

#include "common/error.h"

namespace nasvad::nn {

Var ParameterStore::add_parameter(std::string name, Tensor init) {
  for (const auto& p : params_) {
    if (p.name == name) throw InvalidArgument("duplicate parameter name: " + name);
  }
  Var v(std::move(init), true);
  params_.push_back({std::move(name), v});
  return v;
}

void ParameterStore::add_buffer(std::string name, Tensor* tensor) {
  buffers_.push_back({std::move(name), tensor});
}

int64_t ParameterStore::count() const {
  int64_t n = 0;
  for (const auto& p : params_) n += p.var.value().numel();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.var.zero_grad();
}

Tensor Initializer::uniform(const Shape& shape, int64_t fan_in) {
  Tensor t(shape);
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = rng_.uniform(-bound, bound);
  return t;
}

Conv2d::Conv2d(ParameterStore& store, Initializer& init, const std::string& name, int in,
               int out, int kernel, bool depthwise, bool bias)
    : groups_(depthwise ? in : 1) {
  if (depthwise && in != out) throw InvalidArgument("depthwise conv needs in == out");
  const int in_per_group = depthwise ? 1 : in;
  const int64_t fan_in = static_cast<int64_t>(in_per_group) * kernel * kernel;
  weight_ = store.add_parameter(name + ".weight",
                                init.uniform({out, in_per_group, kernel, kernel}, fan_in));
  if (bias) bias_ = store.add_parameter(name + ".bias", init.uniform({out}, fan_in));
}

Var Conv2d::forward(const Var& x) const { return conv2d(x, weight_, bias_, groups_); }

void Conv2d::zero_init() {
  weight_.mutable_value().fill(0.0);
  if (bias_.defined()) bias_.mutable_value().fill(0.0);
}

BatchNorm2d::BatchNorm2d(ParameterStore& store, const std::string& name, int channels) {
  gamma_ = store.add_parameter(name + ".gamma", Tensor({channels}, 1.0));
  beta_ = store.add_parameter(name + ".beta", Tensor({channels}, 0.0));
  state_.running_mean = Tensor({channels}, 0.0);
  state_.running_var = Tensor({channels}, 1.0);
  store.add_buffer(name + ".running_mean", &state_.running_mean);
  store.add_buffer(name + ".running_var", &state_.running_var);
}

Var BatchNorm2d::forward(const Var& x, bool training) {
  return batch_norm(x, gamma_, beta_, state_, training);
}

LayerNormChannels::LayerNormChannels(ParameterStore& store, const std::string& name,
                                     int channels) {
  gamma_ = store.add_parameter(name + ".gamma", Tensor({channels}, 1.0));
  beta_ = store.add_parameter(name + ".beta", Tensor({channels}, 0.0));
}

Var LayerNormChannels::forward(const Var& x) const {
  return layer_norm_channels(x, gamma_, beta_);
}

Linear::Linear(ParameterStore& store, Initializer& init, const std::string& name, int in,
               int out, bool bias) {
  weight_ = store.add_parameter(name + ".weight", init.uniform({out, in}, in));
  if (bias) bias_ = store.add_parameter(name + ".bias", init.uniform({out}, in));
}

Var Linear::forward(const Var& x) const { return linear(x, weight_, bias_); }

}  // namespace nasvad::nn
