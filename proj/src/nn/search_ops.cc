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

#include "nn/search_ops.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace nasvad::nn {
namespace {

// Pre-activation inverted bottleneck:
// BN-GELU -> 1x1 expand -> BN-GELU -> depthwise kxk -> BN-GELU -> 1x1 project, + x.
class MBConvOp : public SearchOp {
 public:
  MBConvOp(OpKind kind, int c, ParameterStore& s, Initializer& init, const std::string& n,
           const InitOptions& o)
      : SearchOp(kind),
        bn0_(s, n + ".bn0", c),
        expand_(s, init, n + ".expand", c, c * op_params(kind).expansion, 1, false, false),
        bn1_(s, n + ".bn1", c * op_params(kind).expansion),
        depthwise_(s, init, n + ".depthwise", c * op_params(kind).expansion,
                   c * op_params(kind).expansion, op_params(kind).kernel, true, false),
        bn2_(s, n + ".bn2", c * op_params(kind).expansion),
        project_(s, init, n + ".project", c * op_params(kind).expansion, c, 1, false, true) {
    if (o.zero_residual_projection) project_.zero_init();
  }

  Var forward(const Var& x, bool training) override {
    Var h = gelu(bn0_.forward(x, training));
    h = gelu(bn1_.forward(expand_.forward(h), training));
    h = gelu(bn2_.forward(depthwise_.forward(h), training));
    return add(project_.forward(h), x);
  }

 private:
  BatchNorm2d bn0_;
  Conv2d expand_;
  BatchNorm2d bn1_;
  Conv2d depthwise_;
  BatchNorm2d bn2_;
  Conv2d project_;
};

// LN -> 1x1 q/k/v -> multi-head attention over the kind's token axis -> 1x1 out, + x.
class AttentionOp : public SearchOp {
 public:
  AttentionOp(OpKind kind, int c, ParameterStore& s, Initializer& init, const std::string& n,
              const InitOptions& o)
      : SearchOp(kind),
        heads_(op_params(kind).heads),
        axis_(op_params(kind).axis),
        norm_(s, n + ".norm", c),
        query_(s, init, n + ".query", c, c, 1, false, true),
        key_(s, init, n + ".key", c, c, 1, false, true),
        value_(s, init, n + ".value", c, c, 1, false, true),
        out_(s, init, n + ".out", c, c, 1, false, true) {
    if (o.zero_residual_projection) out_.zero_init();
  }

  Var forward(const Var& x, bool) override {
    Var h = norm_.forward(x);
    Var a = multi_head_attention(query_.forward(h), key_.forward(h), value_.forward(h), heads_,
                                 axis_);
    return add(out_.forward(a), x);
  }

 private:
  int heads_;
  AttentionAxis axis_;
  LayerNormChannels norm_;
  Conv2d query_;
  Conv2d key_;
  Conv2d value_;
  Conv2d out_;
};

int ffn_hidden(OpKind kind, int c) {
  return std::max(1, static_cast<int>(std::lround(op_params(kind).ffn_ratio * c)));
}

// LN -> 1x1 C->rC -> GELU -> 1x1 rC->C, + x.
class FfnOp : public SearchOp {
 public:
  FfnOp(OpKind kind, int c, ParameterStore& s, Initializer& init, const std::string& n,
        const InitOptions& o)
      : SearchOp(kind),
        norm_(s, n + ".norm", c),
        fc1_(s, init, n + ".fc1", c, ffn_hidden(kind, c), 1, false, true),
        fc2_(s, init, n + ".fc2", ffn_hidden(kind, c), c, 1, false, true) {
    if (o.zero_residual_projection) fc2_.zero_init();
  }

  Var forward(const Var& x, bool) override {
    return add(fc2_.forward(gelu(fc1_.forward(norm_.forward(x)))), x);
  }

 private:
  LayerNormChannels norm_;
  Conv2d fc1_;
  Conv2d fc2_;
};

// Channel gate from globally pooled statistics; no residual.
class SqueezeExciteOp : public SearchOp {
 public:
  SqueezeExciteOp(OpKind kind, int c, ParameterStore& s, Initializer& init, const std::string& n)
      : SearchOp(kind),
        squeeze_(s, init, n + ".squeeze", c, std::max(1, c / 4)),
        excite_(s, init, n + ".excite", std::max(1, c / 4), c) {}

  Var forward(const Var& x, bool) override {
    Var g = sigmoid(excite_.forward(gelu(squeeze_.forward(global_avg_pool(x)))));
    return scale_channels(x, g);
  }

 private:
  Linear squeeze_;
  Linear excite_;
};

// BN -> kxk conv C->2C -> A * sigmoid(B), + x.
class GluOp : public SearchOp {
 public:
  GluOp(OpKind kind, int c, ParameterStore& s, Initializer& init, const std::string& n,
        const InitOptions& o)
      : SearchOp(kind),
        norm_(s, n + ".norm", c),
        conv_(s, init, n + ".conv", c, 2 * c, op_params(kind).kernel, false, true) {
    if (o.zero_residual_projection) conv_.zero_init();
  }

  Var forward(const Var& x, bool training) override {
    return add(glu_channels(conv_.forward(norm_.forward(x, training))), x);
  }

 private:
  BatchNorm2d norm_;
  Conv2d conv_;
};

class SkipOp : public SearchOp {
 public:
  SkipOp() : SearchOp(OpKind::SKIP) {}
  Var forward(const Var& x, bool) override { return x; }
};

class ZeroOp : public SearchOp {
 public:
  ZeroOp() : SearchOp(OpKind::ZERO) {}
  Var forward(const Var& x, bool) override { return zeros(x.shape()); }
};

}  // namespace

std::unique_ptr<SearchOp> make_search_op(OpKind kind, int channels, ParameterStore& store,
                                         Initializer& init, const std::string& name,
                                         const InitOptions& options) {
  if (channels <= 0) throw InvalidArgument("make_search_op: channels must be positive");
  switch (op_family(kind)) {
    case OpFamily::kConv:
      return std::make_unique<MBConvOp>(kind, channels, store, init, name, options);
    case OpFamily::kAttention:
      if (channels % op_params(kind).heads != 0) {
        throw InvalidArgument(std::string(op_name(kind)) + ": " + std::to_string(channels) +
                              " channels not divisible by head count");
      }
      return std::make_unique<AttentionOp>(kind, channels, store, init, name, options);
    case OpFamily::kFfn:
      return std::make_unique<FfnOp>(kind, channels, store, init, name, options);
    case OpFamily::kSqueezeExcite:
      return std::make_unique<SqueezeExciteOp>(kind, channels, store, init, name);
    case OpFamily::kGlu:
      return std::make_unique<GluOp>(kind, channels, store, init, name, options);
    case OpFamily::kSkip:
      return std::make_unique<SkipOp>();
    case OpFamily::kZero:
      return std::make_unique<ZeroOp>();
  }
  throw InvalidArgument("make_search_op: unknown op kind");
}

std::unique_ptr<StandaloneOp> make_standalone_op(OpKind kind, int channels, uint64_t seed,
                                                 const InitOptions& options) {
  auto unit = std::make_unique<StandaloneOp>();
  Initializer init(seed);
  unit->op = make_search_op(kind, channels, unit->store, init, std::string(op_name(kind)),
                            options);
  return unit;
}

}  // namespace nasvad::nn
