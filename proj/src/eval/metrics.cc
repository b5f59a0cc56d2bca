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

#include "eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "common/error.h"

namespace nasvad::eval {

BoostedScores boosted_predictions(const PredictionSet& raw, int64_t num_frames) {
  const int64_t k = static_cast<int64_t>(raw.offsets.size());
  const int64_t w = raw.window_frames;
  std::vector<double> sum(static_cast<size_t>(num_frames), 0.0);
  BoostedScores out;
  out.counts.assign(static_cast<size_t>(num_frames), 0);
  for (const WindowPrediction& win : raw.windows) {
    if (static_cast<int64_t>(win.scores.size()) != w * k ||
        static_cast<int64_t>(win.mask.size()) != w * k) {
      throw InvalidArgument("boosted_predictions: window has wrong size");
    }
    for (int64_t r = 0; r < w; ++r) {
      for (int64_t j = 0; j < k; ++j) {
        const size_t idx = static_cast<size_t>(r * k + j);
        if (!win.mask[idx]) continue;
        const int64_t u = win.start_frame + r + raw.offsets[static_cast<size_t>(j)];
        if (u < 0 || u >= num_frames) continue;
        sum[static_cast<size_t>(u)] += win.scores[idx];
        ++out.counts[static_cast<size_t>(u)];
      }
    }
  }
  out.scores.resize(sum.size());
  for (size_t u = 0; u < sum.size(); ++u) {
    out.scores[u] = out.counts[u] > 0 ? sum[u] / out.counts[u]
                                      : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double auc(const std::vector<double>& scores, const std::vector<uint8_t>& labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("auc: size mismatch");
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  int64_t pos = 0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    // ranks i+1..j+1 share their average
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) {
      if (labels[order[t]]) {
        pos_rank_sum += avg;
        ++pos;
      }
    }
    i = j + 1;
  }
  const int64_t neg = static_cast<int64_t>(n) - pos;
  if (pos == 0 || neg == 0) throw InvalidArgument("AUC undefined: only one class present");
  const double p = static_cast<double>(pos);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

Confusion confusion(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
                    double threshold) {
  if (scores.size() != labels.size()) throw InvalidArgument("confusion: size mismatch");
  Confusion c;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (labels[i]) {
      pred ? ++c.tp : ++c.fn;
    } else {
      pred ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

double f1(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
          double threshold) {
  const Confusion c = confusion(scores, labels, threshold);
  const double precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  const double recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<RocPoint> roc_curve(const std::vector<double>& scores,
                                const std::vector<uint8_t>& labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("roc_curve: size mismatch");
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  int64_t pos = 0;
  for (uint8_t l : labels) pos += l ? 1 : 0;
  const int64_t neg = static_cast<int64_t>(labels.size()) - pos;
  if (pos == 0 || neg == 0) throw InvalidArgument("ROC undefined: only one class present");
  std::vector<RocPoint> pts;
  pts.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  int64_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      labels[order[i]] ? ++tp : ++fp;
      ++i;
    }
    pts.push_back({s, static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
  }
  return pts;
}

std::string roc_csv(const std::vector<RocPoint>& points) {
  std::ostringstream os;
  os.precision(17);
  os << "threshold,fpr,tpr\n";
  for (const RocPoint& p : points) os << p.threshold << ',' << p.fpr << ',' << p.tpr << '\n';
  return os.str();
}

void FramePool::append(const BoostedScores& boosted, const std::vector<uint8_t>& frame_labels) {
  if (boosted.scores.size() != frame_labels.size()) {
    throw InvalidArgument("FramePool: boosted scores and labels differ in length");
  }
  for (size_t u = 0; u < frame_labels.size(); ++u) {
    if (boosted.counts[u] == 0) continue;
    scores.push_back(boosted.scores[u]);
    labels.push_back(frame_labels[u]);
  }
}

nlohmann::json report_to_json(const MetricReport& report) {
  nlohmann::json files = nlohmann::json::array();
  for (const FileCounts& f : report.files) {
    files.push_back({{"name", f.name},
                     {"frames", f.frames},
                     {"scored_frames", f.scored_frames},
                     {"speech_frames", f.speech_frames}});
  }
  return {{"auc", report.auc},
          {"f1", report.f1},
          {"threshold", report.threshold},
          {"confusion",
           {{"tp", report.confusion.tp},
            {"fp", report.confusion.fp},
            {"tn", report.confusion.tn},
            {"fn", report.confusion.fn}}},
          {"arch_hash", report.arch_hash},
          {"files", files}};
}

}  // namespace nasvad::eval
