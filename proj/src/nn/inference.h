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

#ifndef NASVAD_NN_INFERENCE_H_
#define NASVAD_NN_INFERENCE_H_

#include <optional>
#include <string>
#include <vector>

#include "data/examples.h"
#include "eval/metrics.h"
#include "nn/model.h"

namespace nasvad::nn {

struct Batch {
  Tensor input;   // (B, 1, W, M)
  Tensor labels;  // (B, W, K)
  Tensor mask;    // (B, W, K)
};

// Stacks the selected examples. When `augment_seeds` is non-empty every
// example's input is augmented with its own seed.
Batch make_batch(const data::ExampleSet& set, const std::vector<size_t>& indices,
                 const std::vector<uint64_t>& augment_seeds = {});

// Eval-mode probabilities for every example, grouped per clip.
std::vector<eval::PredictionSet> predict_set(VadModel& model, const data::ExampleSet& set,
                                             int batch_size = 32);

// Mean masked BCE over the whole set in eval mode.
double set_loss(VadModel& model, const data::ExampleSet& set, int batch_size = 32);

struct SetScore {
  std::optional<double> auc;  // empty when only one class is covered
  double f1 = 0.0;
  eval::MetricReport report;
  eval::FramePool pool;
};

// Boosts per clip, pools covered frames across clips, then AUC and F1 at 0.5.
SetScore score_predictions(const data::ExampleSet& set,
                           const std::vector<eval::PredictionSet>& predictions,
                           double threshold = 0.5);
SetScore score_set(VadModel& model, const data::ExampleSet& set, int batch_size = 32);

}  // namespace nasvad::nn

#endif  // NASVAD_NN_INFERENCE_H_
