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

#include "nn/model.h"

#include "common/error.h"

namespace nasvad::nn {

// Matches a source tensor (channels, features) to a cell's working geometry:
// average-pool the feature axis when widths differ, then a 1x1 convolution
// when channel counts differ. Identity otherwise.
class PortPreprocess {
 public:
  PortPreprocess(ParameterStore& store, Initializer& init, const std::string& name,
                 int in_channels, int in_features, const CellGeometry& target)
      : pool_(in_features != target.features) {
    if (pool_ && (in_features + 1) / 2 != target.features) {
      throw InvalidArgument("port preprocess: cannot map feature width " +
                            std::to_string(in_features) + " to " +
                            std::to_string(target.features));
    }
    if (in_channels != target.channels) {
      conv_ = std::make_unique<Conv2d>(store, init, name + ".conv", in_channels,
                                       target.channels, 1, false, true);
    }
  }

  Var forward(const Var& x) const {
    Var h = pool_ ? avg_pool_feature2(x) : x;
    return conv_ ? conv_->forward(h) : h;
  }

 private:
  bool pool_;
  std::unique_ptr<Conv2d> conv_;
};

class CellModule {
 public:
  CellModule(const CellSpec& cell, int channels, ParameterStore& store, Initializer& init,
             const std::string& name, const InitOptions& options)
      : spec_(cell) {
    for (size_t i = 0; i < cell.edges.size(); ++i) {
      ops_.push_back(make_search_op(cell.edges[i].op, channels, store, init,
                                    name + ".edge" + std::to_string(i), options));
    }
  }

  Var forward(const Var& in_prev, const Var& in_prev_prev, bool training) {
    std::vector<Var> nodes = {in_prev, in_prev_prev};
    for (int n = kNumInputNodes; n < kNumCellNodes; ++n) {
      std::vector<Var> terms;
      for (size_t i = 0; i < spec_.edges.size(); ++i) {
        const CellEdge& e = spec_.edges[i];
        if (e.target != n || e.op == OpKind::ZERO) continue;
        terms.push_back(ops_[i]->forward(nodes[static_cast<size_t>(e.source)], training));
      }
      nodes.push_back(terms.empty() ? zeros(in_prev.shape()) : add_n(terms));
    }
    std::vector<Var> outs(nodes.begin() + kNumInputNodes, nodes.end());
    return concat_channels(outs);
  }

 private:
  CellSpec spec_;
  std::vector<std::unique_ptr<SearchOp>> ops_;
};

std::vector<CellGeometry> cell_geometry(const ArchSpec& arch) {
  std::vector<CellGeometry> geo;
  for (int i = 1; i <= arch.num_cells; ++i) {
    CellGeometry g;
    const bool reduced = i >= arch.reduction_index;
    g.channels = reduced ? 2 * arch.base_channels : arch.base_channels;
    g.features = reduced ? (arch.input_mel_bins + 1) / 2 : arch.input_mel_bins;
    g.reduction = i == arch.reduction_index;
    geo.push_back(g);
  }
  return geo;
}

VadModel::VadModel(const ArchSpec& arch, uint64_t seed, const InitOptions& options)
    : arch_(arch), seed_(seed) {
  ValidationReport report = validate_arch(arch);
  if (!report.ok) throw SchemaError("invalid architecture:\n" + report.to_string());

  Initializer init(seed);
  const int c = arch.base_channels;
  stem_conv1_ = std::make_unique<Conv2d>(store_, init, "stem.conv1", 1, c, 3, false, false);
  stem_bn1_ = std::make_unique<BatchNorm2d>(store_, "stem.bn1", c);
  stem_conv2_ = std::make_unique<Conv2d>(store_, init, "stem.conv2", c, c, 3, false, false);
  stem_bn2_ = std::make_unique<BatchNorm2d>(store_, "stem.bn2", c);

  geometry_ = cell_geometry(arch);
  // (channels, features) emitted by the stem and each cell so far.
  std::vector<std::pair<int, int>> emitted = {{c, arch.input_mel_bins}};
  for (int i = 0; i < arch.num_cells; ++i) {
    const std::string name = "cell" + std::to_string(i + 1);
    const auto prev = emitted.back();
    const auto prev_prev = emitted.size() >= 2 ? emitted[emitted.size() - 2] : emitted.back();
    pre_prev_.push_back(std::make_unique<PortPreprocess>(
        store_, init, name + ".pre_in1", prev.first, prev.second, geometry_[i]));
    pre_prev_prev_.push_back(std::make_unique<PortPreprocess>(
        store_, init, name + ".pre_in2", prev_prev.first, prev_prev.second, geometry_[i]));
    cells_.push_back(std::make_unique<CellModule>(arch.cell, geometry_[i].channels, store_,
                                                  init, name, options));
    emitted.emplace_back(kNumAddNodes * geometry_[i].channels, geometry_[i].features);
  }
  const auto last = emitted.back();
  const int fan_in = last.first * last.second;
  const int k = static_cast<int>(arch.target_offsets.size());
  head_weight_ = store_.add_parameter("head.weight", init.uniform({k, fan_in}, fan_in));
  head_bias_ = store_.add_parameter("head.bias", init.uniform({k}, fan_in));
}

VadModel::~VadModel() = default;

Var VadModel::forward(const Var& input, bool training, ForwardTrace* trace) {
  const Shape& s = input.shape();
  if (s.size() != 4 || s[1] != 1 || s[3] != arch_.input_mel_bins) {
    throw InvalidArgument("VadModel: expected input (B, 1, T, " +
                          std::to_string(arch_.input_mel_bins) + "), got " + shape_str(s));
  }
  Var h = gelu(stem_bn1_->forward(stem_conv1_->forward(input), training));
  h = gelu(stem_bn2_->forward(stem_conv2_->forward(h), training));
  if (trace) trace->stem = h.shape();

  Var prev = h;
  Var prev_prev = h;
  for (size_t i = 0; i < cells_.size(); ++i) {
    Var a = pre_prev_[i]->forward(prev);
    Var b = pre_prev_prev_[i]->forward(prev_prev);
    Var out = cells_[i]->forward(a, b, training);
    if (trace) {
      trace->cell_inputs_prev.push_back(a.shape());
      trace->cell_inputs_prev_prev.push_back(b.shape());
      trace->cell_outputs.push_back(out.shape());
    }
    prev_prev = prev;
    prev = out;
  }
  Var logits = time_linear(prev, head_weight_, head_bias_);
  if (trace) trace->logits = logits.shape();
  return logits;
}

Tensor VadModel::predict(const Tensor& input) {
  NoGradGuard guard;
  Var logits = forward(Var(input), false);
  return sigmoid(logits).value();
}

std::unique_ptr<VadModel> build_model(const ArchSpec& arch, uint64_t seed,
                                      const InitOptions& options) {
  return std::make_unique<VadModel>(arch, seed, options);
}

int64_t count_params(const VadModel& model) { return model.store().count(); }

}  // namespace nasvad::nn
