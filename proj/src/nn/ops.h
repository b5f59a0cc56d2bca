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

#ifndef NASVAD_NN_OPS_H_
#define NASVAD_NN_OPS_H_

#include <span>

#include "arch/op_kind.h"
#include "nn/autograd.h"

namespace nasvad::nn {

// Differentiable primitives. Unless stated otherwise, activations are
// (batch, channel, time, feature) and shapes must match exactly.

Var add(const Var& a, const Var& b);
Var add_n(std::span<const Var> terms);
Var mul(const Var& a, const Var& b);
Var gelu(const Var& x);
Var sigmoid(const Var& x);

// Constant zeros; no gradient flows through it.
Var zeros(const Shape& shape);

// Stride-1 convolution with "same" zero padding and odd square kernel.
// weight: (out, in / groups, k, k); bias: (out) or undefined. Supports
// groups == 1 and depthwise (groups == in == out).
Var conv2d(const Var& x, const Var& weight, const Var& bias, int groups = 1);

struct BatchNormState {
  Tensor running_mean;
  Tensor running_var;
};

// Per-channel normalization over (batch, time, feature). In training mode
// batch statistics are used and the running estimates updated.
Var batch_norm(const Var& x, const Var& gamma, const Var& beta, BatchNormState& state,
               bool training, double momentum = 0.1, double eps = 1e-5);

// Normalizes each (batch, time, feature) position across channels.
Var layer_norm_channels(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);

// Kernel-2 stride-2 average pooling on the feature axis; an odd trailing bin
// is averaged on its own, so the output width is ceil(F / 2).
Var avg_pool_feature2(const Var& x);

// (B, C, T, F) -> (B, C).
Var global_avg_pool(const Var& x);

// x: (B, in), weight: (out, in), bias: (out) or undefined -> (B, out).
Var linear(const Var& x, const Var& weight, const Var& bias);

// x: (B, C, T, F) scaled by gate: (B, C).
Var scale_channels(const Var& x, const Var& gate);

Var concat_channels(std::span<const Var> parts);

// (B, 2C, T, F) -> first half * sigmoid(second half).
Var glu_channels(const Var& x);

// Scaled dot-product attention with `heads` heads over the token layout given
// by `axis`; q, k, v are already projected, shape (B, C, T, F).
Var multi_head_attention(const Var& q, const Var& k, const Var& v, int heads,
                         AttentionAxis axis);

// Per-time-step head: flattens (C, F) at every time step and applies
// weight: (K, C * F), bias: (K). Output (B, T, K).
Var time_linear(const Var& x, const Var& weight, const Var& bias);

// Mean binary cross-entropy over entries with mask != 0. logits, labels and
// mask share a shape. Returns a scalar; zero when the mask is empty.
Var masked_bce_with_logits(const Var& logits, const Tensor& labels, const Tensor& mask);

// sum(x * weights), a scalar; used to reduce outputs in gradient checks.
Var weighted_sum(const Var& x, const Tensor& weights);

}  // namespace nasvad::nn

#endif  // NASVAD_NN_OPS_H_
