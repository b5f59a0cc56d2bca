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

#ifndef NASVAD_EVAL_METRICS_H_
#define NASVAD_EVAL_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace nasvad::eval {

// Raw head outputs of one window: rows x offsets, row-major.
struct WindowPrediction {
  int64_t start_frame = 0;
  std::vector<double> scores;
  std::vector<uint8_t> mask;
};

// All windows of one file.
struct PredictionSet {
  int window_frames = 0;
  std::vector<int> offsets;
  std::vector<WindowPrediction> windows;
};

struct BoostedScores {
  std::vector<double> scores;  // per frame; NaN where count == 0
  std::vector<int> counts;
};

// Frame u gets the mean of every unmasked output (r, j) of every window with
// start + r + offsets[j] == u. `num_frames` is the file's frame count;
// contributions outside [0, num_frames) are dropped.
BoostedScores boosted_predictions(const PredictionSet& raw, int64_t num_frames);

// Rank-based ROC AUC with average ranks for ties. Throws InvalidArgument
// ("AUC undefined") unless both classes are present.
double auc(const std::vector<double>& scores, const std::vector<uint8_t>& labels);

struct Confusion {
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};
Confusion confusion(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
                    double threshold = 0.5);
double f1(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
          double threshold = 0.5);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};
// One point per distinct score, descending thresholds, starting at (0, 0).
std::vector<RocPoint> roc_curve(const std::vector<double>& scores,
                                const std::vector<uint8_t>& labels);
std::string roc_csv(const std::vector<RocPoint>& points);

// Scores and labels of all covered frames across files, in file order.
struct FramePool {
  std::vector<double> scores;
  std::vector<uint8_t> labels;
  void append(const BoostedScores& boosted, const std::vector<uint8_t>& frame_labels);
};

struct FileCounts {
  std::string name;
  int64_t frames = 0;
  int64_t scored_frames = 0;
  int64_t speech_frames = 0;
};

struct MetricReport {
  double auc = 0.0;
  double f1 = 0.0;
  double threshold = 0.5;
  Confusion confusion;
  std::string arch_hash;
  std::vector<FileCounts> files;
};

nlohmann::json report_to_json(const MetricReport& report);

}  // namespace nasvad::eval

#endif  // NASVAD_EVAL_METRICS_H_
