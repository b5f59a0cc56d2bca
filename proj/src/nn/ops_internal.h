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

#ifndef NASVAD_NN_OPS_INTERNAL_H_
#define NASVAD_NN_OPS_INTERNAL_H_

#include <string>

#include "common/error.h"
#include "nn/autograd.h"

namespace nasvad::nn::internal {

// Gradient buffer of parent i, or nullptr if it takes no gradient.
inline Tensor* parent_grad(Node& self, size_t i) {
  if (i >= self.parents.size()) return nullptr;
  Node* p = self.parents[i].get();
  if (p == nullptr || !p->requires_grad) return nullptr;
  return &p->grad_buffer();
}

inline const Tensor& parent_value(const Node& self, size_t i) {
  return self.parents[i]->value;
}

inline void require_rank(const Var& x, int rank, const char* op) {
  if (x.value().rank() != rank) {
    throw InvalidArgument(std::string(op) + ": expected rank " + std::to_string(rank) +
                          " input, got " + shape_str(x.shape()));
  }
}

inline void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw InvalidArgument(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                          " vs " + shape_str(b.shape()));
  }
}

}  // namespace nasvad::nn::internal

#endif  // NASVAD_NN_OPS_INTERNAL_H_
