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

#ifndef NASVAD_NN_SEARCH_OPS_H_
#define NASVAD_NN_SEARCH_OPS_H_

#include <memory>
#include <string>

#include "arch/op_kind.h"
#include "nn/layers.h"

namespace nasvad::nn {

struct InitOptions {
  // Zero the last projection of every residual op (MBConv, MHA, FFN, GLU) so
  // that it starts as the identity.
  bool zero_residual_projection = false;
};

// A cell-edge operation. Every kind maps (B, C, T, F) to the same shape.
class SearchOp {
 public:
  virtual ~SearchOp() = default;
  virtual Var forward(const Var& x, bool training) = 0;
  OpKind kind() const { return kind_; }

 protected:
  explicit SearchOp(OpKind kind) : kind_(kind) {}

 private:
  OpKind kind_;
};

// Throws InvalidArgument if `channels` is incompatible with the kind (e.g.
// not divisible by the head count).
std::unique_ptr<SearchOp> make_search_op(OpKind kind, int channels, ParameterStore& store,
                                         Initializer& init, const std::string& name,
                                         const InitOptions& options = {});

// Wraps a SearchOp into a standalone unit with its own parameters, for tests
// and tooling.
struct StandaloneOp {
  ParameterStore store;
  std::unique_ptr<SearchOp> op;
};
std::unique_ptr<StandaloneOp> make_standalone_op(OpKind kind, int channels, uint64_t seed,
                                                 const InitOptions& options = {});

}  // namespace nasvad::nn

#endif  // NASVAD_NN_SEARCH_OPS_H_
