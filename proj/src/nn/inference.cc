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

#include "nn/inference.h"

#include <algorithm>
#include <cstring>

#include "arch/wl.h"
#include "common/error.h"

namespace nasvad::nn {

Batch make_batch(const data::ExampleSet& set, const std::vector<size_t>& indices,
                 const std::vector<uint64_t>& augment_seeds) {
  if (indices.empty()) throw InvalidArgument("make_batch: no examples selected");
  if (!augment_seeds.empty() && augment_seeds.size() != indices.size()) {
    throw InvalidArgument("make_batch: one augmentation seed per example required");
  }
  const auto b = static_cast<int64_t>(indices.size());
  const int64_t w = set.window_frames;
  const int64_t m = set.mel_bins;
  const int64_t k = set.num_offsets();
  Batch batch{Tensor({b, 1, w, m}), Tensor({b, w, k}), Tensor({b, w, k})};
  std::vector<double> scratch;
  for (int64_t i = 0; i < b; ++i) {
    const data::Example& ex = set.examples.at(indices[static_cast<size_t>(i)]);
    const std::vector<double>* input = &ex.input;
    if (!augment_seeds.empty()) {
      scratch = ex.input;
      data::apply_augment(scratch, static_cast<int>(m),
                          data::draw_augment(augment_seeds[static_cast<size_t>(i)], static_cast<int>(m)));
      input = &scratch;
    }
    std::copy(input->begin(), input->end(), batch.input.data() + i * w * m);
    for (int64_t e = 0; e < w * k; ++e) {
      batch.labels[i * w * k + e] = ex.labels[static_cast<size_t>(e)];
      batch.mask[i * w * k + e] = ex.mask[static_cast<size_t>(e)];
    }
  }
  return batch;
}

namespace {

template <typename Fn>
void for_each_batch(const data::ExampleSet& set, int batch_size, Fn fn) {
  if (batch_size <= 0) throw InvalidArgument("batch_size must be positive");
  for (size_t start = 0; start < set.size(); start += static_cast<size_t>(batch_size)) {
    std::vector<size_t> idx;
    for (size_t i = start; i < std::min(set.size(), start + static_cast<size_t>(batch_size)); ++i) {
      idx.push_back(i);
    }
    fn(idx, make_batch(set, idx));
  }
}

}  // namespace

std::vector<eval::PredictionSet> predict_set(VadModel& model, const data::ExampleSet& set,
                                             int batch_size) {
  std::vector<eval::PredictionSet> out(set.clips.size());
  for (eval::PredictionSet& p : out) {
    p.window_frames = set.window_frames;
    p.offsets = set.offsets;
  }
  const int64_t wk = static_cast<int64_t>(set.window_frames) * set.num_offsets();
  for_each_batch(set, batch_size, [&](const std::vector<size_t>& idx, const Batch& batch) {
    Tensor probs = model.predict(batch.input);
    for (size_t i = 0; i < idx.size(); ++i) {
      const data::Example& ex = set.examples[idx[i]];
      eval::WindowPrediction wp;
      wp.start_frame = ex.start_frame;
      wp.scores.assign(probs.data() + static_cast<int64_t>(i) * wk,
                       probs.data() + static_cast<int64_t>(i + 1) * wk);
      wp.mask = ex.mask;
      out.at(static_cast<size_t>(ex.clip)).windows.push_back(std::move(wp));
    }
  });
  return out;
}

double set_loss(VadModel& model, const data::ExampleSet& set, int batch_size) {
  NoGradGuard guard;
  double total = 0.0;
  double count = 0.0;
  for_each_batch(set, batch_size, [&](const std::vector<size_t>&, const Batch& batch) {
    Var logits = model.forward(Var(batch.input), false);
    double valid = 0.0;
    for (int64_t i = 0; i < batch.mask.numel(); ++i) valid += batch.mask[i];
    if (valid == 0.0) return;
    const double loss = masked_bce_with_logits(logits, batch.labels, batch.mask).value()[0];
    total += loss * valid;
    count += valid;
  });
  if (count == 0.0) throw InvalidArgument("set_loss: no valid targets in set");
  return total / count;
}

SetScore score_predictions(const data::ExampleSet& set,
                           const std::vector<eval::PredictionSet>& predictions,
                           double threshold) {
  if (predictions.size() != set.clips.size()) {
    throw InvalidArgument("score_predictions: one prediction set per clip required");
  }
  SetScore s;
  for (size_t c = 0; c < set.clips.size(); ++c) {
    const auto& labels = set.clips[c].labels;
    eval::BoostedScores boosted =
        eval::boosted_predictions(predictions[c], static_cast<int64_t>(labels.size()));
    const size_t before = s.pool.scores.size();
    s.pool.append(boosted, labels);
    eval::FileCounts fc;
    fc.name = set.clips[c].name;
    fc.frames = static_cast<int64_t>(labels.size());
    fc.scored_frames = static_cast<int64_t>(s.pool.scores.size() - before);
    fc.speech_frames = std::count(labels.begin(), labels.end(), uint8_t{1});
    s.report.files.push_back(fc);
  }
  const bool has_pos = std::find(s.pool.labels.begin(), s.pool.labels.end(), 1) != s.pool.labels.end();
  const bool has_neg = std::find(s.pool.labels.begin(), s.pool.labels.end(), 0) != s.pool.labels.end();
  if (has_pos && has_neg) s.auc = eval::auc(s.pool.scores, s.pool.labels);
  s.f1 = eval::f1(s.pool.scores, s.pool.labels, threshold);
  s.report.auc = s.auc.value_or(std::numeric_limits<double>::quiet_NaN());
  s.report.f1 = s.f1;
  s.report.threshold = threshold;
  s.report.confusion = eval::confusion(s.pool.scores, s.pool.labels, threshold);
  return s;
}

SetScore score_set(VadModel& model, const data::ExampleSet& set, int batch_size) {
  SetScore s = score_predictions(set, predict_set(model, set, batch_size));
  s.report.arch_hash = canonical_hash(model.arch().cell);
  return s;
}

}  // namespace nasvad::nn
