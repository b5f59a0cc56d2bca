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

#include <cmath>

#include "doctest.h"

#include "common/error.h"
#include "common/rng.h"
#include "data/examples.h"
#include "eval/metrics.h"
#include "nn/inference.h"
#include "test_support.h"

namespace nasvad::eval {
namespace {

void random_points(uint64_t seed, int n, bool ties, std::vector<double>& scores,
                   std::vector<uint8_t>& labels) {
  Rng rng(seed);
  scores.clear();
  labels.clear();
  for (int i = 0; i < n; ++i) {
    double s = rng.uniform();
    if (ties) s = std::round(s * 10.0) / 10.0;
    scores.push_back(s);
    labels.push_back(rng.uniform() < 0.4);
  }
}

PredictionSet random_prediction_set(uint64_t seed, int windows, int w,
                                    const std::vector<int>& offsets) {
  Rng rng(seed);
  PredictionSet p;
  p.window_frames = w;
  p.offsets = offsets;
  const size_t k = offsets.size();
  for (int i = 0; i < windows; ++i) {
    WindowPrediction win;
    win.start_frame = static_cast<int64_t>(i) * w;
    for (size_t j = 0; j < static_cast<size_t>(w) * k; ++j) {
      win.scores.push_back(static_cast<double>(rng.uniform_int(0, 1024)) / 1024.0);
      win.mask.push_back(rng.uniform() < 0.85);
    }
    p.windows.push_back(win);
  }
  return p;
}

TEST_CASE("AUC equals pair counting") {
  std::vector<double> s;
  std::vector<uint8_t> l;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    for (bool ties : {false, true}) {
      random_points(seed, 200, ties, s, l);
      CHECK(std::abs(auc(s, l) - testing::auc_by_pairs(s, l)) < 1e-12);
    }
  }
  CHECK(auc({0.1, 0.9}, {0, 1}) == 1.0);
  CHECK(auc({0.9, 0.1}, {0, 1}) == 0.0);
  CHECK(auc({0.5, 0.5, 0.5}, {0, 1, 1}) == 0.5);
  CHECK_THROWS_WITH(auc({0.1, 0.2}, {1, 1}), doctest::Contains("AUC undefined"));
  CHECK_THROWS_AS(auc({0.1}, {1, 0}), Error);
}

TEST_CASE("F1 equals confusion arithmetic") {
  std::vector<double> s;
  std::vector<uint8_t> l;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    random_points(seed, 200, seed % 2, s, l);
    Confusion c{};
    for (size_t i = 0; i < s.size(); ++i) {
      const bool p = s[i] >= 0.5;
      if (p && l[i]) ++c.tp;
      if (p && !l[i]) ++c.fp;
      if (!p && l[i]) ++c.fn;
      if (!p && !l[i]) ++c.tn;
    }
    Confusion got = confusion(s, l);
    CHECK(got.tp == c.tp);
    CHECK(got.fp == c.fp);
    CHECK(got.tn == c.tn);
    CHECK(got.fn == c.fn);
    const double expect = 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn);
    const double precision = static_cast<double>(c.tp) / (c.tp + c.fp);
    const double recall = static_cast<double>(c.tp) / (c.tp + c.fn);
    CHECK(f1(s, l) == 2.0 * precision * recall / (precision + recall));
    CHECK(std::abs(f1(s, l) - expect) < 1e-15);
  }
  CHECK(f1({0.1, 0.2}, {1, 1}) == 0.0);
}

TEST_CASE("ROC curve") {
  std::vector<double> s;
  std::vector<uint8_t> l;
  random_points(4, 100, true, s, l);
  auto pts = roc_curve(s, l);
  CHECK(std::isinf(pts.front().threshold));
  CHECK(pts.front().fpr == 0.0);
  CHECK(pts.back().fpr == 1.0);
  CHECK(pts.back().tpr == 1.0);
  double area = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].threshold < pts[i - 1].threshold);
    CHECK(pts[i].fpr >= pts[i - 1].fpr);
    CHECK(pts[i].tpr >= pts[i - 1].tpr);
    area += (pts[i].fpr - pts[i - 1].fpr) * 0.5 * (pts[i].tpr + pts[i - 1].tpr);
  }
  CHECK(area == doctest::Approx(auc(s, l)).epsilon(1e-12));
  const std::string csv = roc_csv(pts);
  CHECK(csv.rfind("threshold,fpr,tpr\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(pts.size() + 1));
}

TEST_CASE("boosted predictions equal the gathering oracle") {
  const std::vector<int> offsets = {-19, -10, -1, 0, 1, 10, 19};
  for (uint64_t seed = 0; seed < 5; ++seed) {
    PredictionSet p = random_prediction_set(seed, 4, 64, offsets);
    const int64_t frames = 230;
    BoostedScores got = boosted_predictions(p, frames);
    BoostedScores want = testing::boost_by_gathering(p, frames);
    REQUIRE(got.scores.size() == static_cast<size_t>(frames));
    CHECK(got.counts == want.counts);
    for (int64_t u = 0; u < frames; ++u) {
      if (want.counts[u] == 0) {
        CHECK(std::isnan(got.scores[u]));
      } else {
        CHECK(got.scores[u] == want.scores[u]);
      }
    }
  }
}

TEST_CASE("boosting by hand") {
  PredictionSet p;
  p.window_frames = 2;
  p.offsets = {0, 1};
  p.windows.push_back({0, {0.2, 0.4, 0.6, 0.8}, {1, 1, 1, 1}});
  // row 0: frame 0 gets 0.2, frame 1 gets 0.4; row 1: frame 1 gets 0.6, frame 2 gets 0.8
  BoostedScores b = boosted_predictions(p, 3);
  CHECK(b.counts == std::vector<int>{1, 2, 1});
  CHECK(b.scores[0] == 0.2);
  CHECK(b.scores[1] == doctest::Approx(0.5));
  CHECK(b.scores[2] == 0.8);
  FramePool pool;
  pool.append(b, {0, 1, 1});
  CHECK(pool.scores.size() == 3);
  p.windows[0].mask = {1, 0, 0, 0};
  b = boosted_predictions(p, 3);
  pool = {};
  pool.append(b, {0, 1, 1});
  CHECK(pool.scores == std::vector<double>{0.2});
  p.windows[0].scores.pop_back();
  CHECK_THROWS_AS(boosted_predictions(p, 3), Error);
}

TEST_CASE("set scoring pools boosted frames across files") {
  data::ExampleSet set;
  set.window_frames = 2;
  set.mel_bins = 1;
  set.offsets = {0};
  set.clips = {{"a", {1, 0, 1}}, {"b", {0, 0}}};
  std::vector<PredictionSet> preds(2);
  for (auto& p : preds) {
    p.window_frames = 2;
    p.offsets = {0};
  }
  preds[0].windows = {{0, {0.9, 0.1}, {1, 1}}, {2, {0.7, 0.0}, {1, 0}}};
  preds[1].windows = {{0, {0.3, 0.8}, {1, 1}}};
  nn::SetScore s = nn::score_predictions(set, preds);
  REQUIRE(s.auc.has_value());
  CHECK(s.pool.scores == std::vector<double>{0.9, 0.1, 0.7, 0.3, 0.8});
  CHECK(*s.auc == testing::auc_by_pairs(s.pool.scores, s.pool.labels));
  CHECK(s.report.files.size() == 2);
  CHECK(s.report.files[0].speech_frames == 2);
  CHECK(s.report.files[1].scored_frames == 2);
  nlohmann::json j = report_to_json(s.report);
  CHECK(j.at("confusion").at("tp") == 2);
  CHECK(j.at("confusion").at("fp") == 1);
  CHECK(j.at("files").size() == 2);
}

}  // namespace
}  // namespace nasvad::eval
