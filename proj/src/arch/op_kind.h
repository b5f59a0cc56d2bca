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

#ifndef NASVAD_ARCH_OP_KIND_H_
#define NASVAD_ARCH_OP_KIND_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace nasvad {

// The 18 candidate operations on a cell edge.
enum class OpKind : uint8_t {
  MBConv3x2,
  MBConv3x4,
  MBConv5x2,
  MBConv5x4,
  MHA_T_2,
  MHA_T_4,
  MHA_F_2,
  MHA_F_4,
  MHA_TF_2,
  MHA_TF_4,
  FFN_05,
  FFN_1,
  FFN_2,
  SE_025,
  GLU_3,
  GLU_5,
  SKIP,
  ZERO,
};

inline constexpr size_t kNumOpKinds = 18;

enum class OpFamily { kConv, kAttention, kFfn, kSqueezeExcite, kGlu, kSkip, kZero };

// Attention token layout: time steps, feature bins, or every (time, feature)
// position.
enum class AttentionAxis { kTime, kFeature, kTimeFeature };

const std::array<OpKind, kNumOpKinds>& all_op_kinds();
std::string_view op_name(OpKind kind);
std::optional<OpKind> op_from_name(std::string_view name);
OpFamily op_family(OpKind kind);

// Per-kind hyperparameters. Fields not meaningful for a family are zero.
struct OpParams {
  int kernel = 0;          // MBConv, GLU
  int expansion = 0;       // MBConv
  int heads = 0;           // attention
  AttentionAxis axis = AttentionAxis::kTime;
  double ffn_ratio = 0.0;  // FFN
  double squeeze = 0.0;    // SE
};
OpParams op_params(OpKind kind);

inline bool is_attention(OpKind kind) {
  return op_family(kind) == OpFamily::kAttention;
}

std::vector<OpKind> all_op_kinds_vector();

}  // namespace nasvad

#endif  // NASVAD_ARCH_OP_KIND_H_
