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

#include "arch/op_kind.h"

namespace nasvad {
namespace {

struct OpInfo {
  OpKind kind;
  std::string_view name;
  OpFamily family;
  OpParams params;
};

constexpr OpInfo kOps[kNumOpKinds] = {
    {OpKind::MBConv3x2, "MBConv3x2", OpFamily::kConv, {3, 2, 0, AttentionAxis::kTime, 0, 0}},
    {OpKind::MBConv3x4, "MBConv3x4", OpFamily::kConv, {3, 4, 0, AttentionAxis::kTime, 0, 0}},
    {OpKind::MBConv5x2, "MBConv5x2", OpFamily::kConv, {5, 2, 0, AttentionAxis::kTime, 0, 0}},
    {OpKind::MBConv5x4, "MBConv5x4", OpFamily::kConv, {5, 4, 0, AttentionAxis::kTime, 0, 0}},
    {OpKind::MHA_T_2, "MHA_T_2", OpFamily::kAttention, {0, 0, 2, AttentionAxis::kTime, 0, 0}},
    {OpKind::MHA_T_4, "MHA_T_4", OpFamily::kAttention, {0, 0, 4, AttentionAxis::kTime, 0, 0}},
    {OpKind::MHA_F_2, "MHA_F_2", OpFamily::kAttention, {0, 0, 2, AttentionAxis::kFeature, 0, 0}},
    {OpKind::MHA_F_4, "MHA_F_4", OpFamily::kAttention, {0, 0, 4, AttentionAxis::kFeature, 0, 0}},
    {OpKind::MHA_TF_2, "MHA_TF_2", OpFamily::kAttention, {0, 0, 2, AttentionAxis::kTimeFeature, 0, 0}},
    {OpKind::MHA_TF_4, "MHA_TF_4", OpFamily::kAttention, {0, 0, 4, AttentionAxis::kTimeFeature, 0, 0}},
    {OpKind::FFN_05, "FFN_05", OpFamily::kFfn, {0, 0, 0, AttentionAxis::kTime, 0.5, 0}},
    {OpKind::FFN_1, "FFN_1", OpFamily::kFfn, {0, 0, 0, AttentionAxis::kTime, 1.0, 0}},
    {OpKind::FFN_2, "FFN_2", OpFamily::kFfn, {0, 0, 0, AttentionAxis::kTime, 2.0, 0}},
    {OpKind::SE_025, "SE_025", OpFamily::kSqueezeExcite, {0, 0, 0, AttentionAxis::kTime, 0, 0.25}},
    {OpKind::GLU_3, "GLU_3", OpFamily::kGlu, {3, 0, 0, AttentionAxis::kTime, 0, 0}},
    {OpKind::GLU_5, "GLU_5", OpFamily::kGlu, {5, 0, 0, AttentionAxis::kTime, 0, 0}},
    {OpKind::SKIP, "SKIP", OpFamily::kSkip, {}},
    {OpKind::ZERO, "ZERO", OpFamily::kZero, {}},
};

const OpInfo& info(OpKind kind) { return kOps[static_cast<size_t>(kind)]; }

}  // namespace

const std::array<OpKind, kNumOpKinds>& all_op_kinds() {
  static const std::array<OpKind, kNumOpKinds> kinds = [] {
    std::array<OpKind, kNumOpKinds> k{};
    for (size_t i = 0; i < kNumOpKinds; ++i) k[i] = kOps[i].kind;
    return k;
  }();
  return kinds;
}

std::vector<OpKind> all_op_kinds_vector() {
  const auto& k = all_op_kinds();
  return {k.begin(), k.end()};
}

std::string_view op_name(OpKind kind) { return info(kind).name; }

std::optional<OpKind> op_from_name(std::string_view name) {
  for (const auto& op : kOps) {
    if (op.name == name) return op.kind;
  }
  return std::nullopt;
}

OpFamily op_family(OpKind kind) { return info(kind).family; }

OpParams op_params(OpKind kind) { return info(kind).params; }

}  // namespace nasvad
