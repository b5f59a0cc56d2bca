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

#include "surrogate/gp.h"

#include <cmath>
#include <numbers>

#include "common/error.h"
#include "common/logging.h"

namespace nasvad {

double wl_kernel(const WLFeatureVector& a, const WLFeatureVector& b, bool normalized) {
  if (a.depth != b.depth) throw InvalidArgument("wl_kernel: WL depth mismatch");
  auto dot = [](const WLFeatureVector& x, const WLFeatureVector& y) {
    double s = 0.0;
    auto i = x.counts.begin();
    auto j = y.counts.begin();
    while (i != x.counts.end() && j != y.counts.end()) {
      if (i->first < j->first) {
        ++i;
      } else if (j->first < i->first) {
        ++j;
      } else {
        s += static_cast<double>(i->second) * static_cast<double>(j->second);
        ++i;
        ++j;
      }
    }
    return s;
  };
  const double k = dot(a, b);
  if (!normalized) return k;
  const double kaa = dot(a, a);
  const double kbb = dot(b, b);
  if (kaa <= 0.0 || kbb <= 0.0) {
    throw InvalidArgument("wl_kernel: cannot normalize an empty feature vector");
  }
  return k / std::sqrt(kaa * kbb);
}

Eigen::MatrixXd wl_kernel_matrix(std::span<const WLFeatureVector> features, bool normalized) {
  const auto n = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = wl_kernel(features[i], features[j], normalized);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  if (normalized) k.diagonal().setOnes();
  return k;
}

std::vector<GPHyper> hyper_grid(std::span<const double> scores) {
  const size_t n = scores.size();
  double mean = 0.0;
  for (double y : scores) mean += y;
  mean /= static_cast<double>(n);
  double base = 0.0;
  if (n > 1) {
    for (double y : scores) base += (y - mean) * (y - mean);
    base /= static_cast<double>(n - 1);
  }
  if (base <= 1e-12) {
    // Degenerate spread: fall back to the second moment, which is the prior
    // variance a zero-mean GP needs to reach the observed level.
    double m2 = 0.0;
    for (double y : scores) m2 += y * y;
    m2 /= static_cast<double>(n);
    base = m2 > 1e-12 ? m2 : 1.0;
  }
  std::vector<GPHyper> grid;
  for (double mult : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int i = 0; i <= 10; ++i) {
      grid.push_back({mult * base, std::pow(10.0, -6.0 + 0.5 * i)});
    }
  }
  return grid;
}

GPModel gp_fit(std::span<const WLFeatureVector> features, std::span<const double> scores,
               std::optional<GPHyper> fixed_hyper) {
  if (features.empty()) throw InvalidArgument("gp_fit: no training points");
  if (features.size() != scores.size()) {
    throw InvalidArgument("gp_fit: features and scores differ in length");
  }
  for (double y : scores) {
    if (!std::isfinite(y)) throw InvalidArgument("gp_fit: non-finite score");
  }
  const int depth = features.front().depth;
  for (const auto& f : features) {
    if (f.depth != depth) throw InvalidArgument("gp_fit: mixed WL depths");
  }

  GPModel model;
  model.features_.assign(features.begin(), features.end());
  const auto n = static_cast<Eigen::Index>(features.size());
  model.scores_ = Eigen::Map<const Eigen::VectorXd>(scores.data(), n);
  for (const auto& f : features) model.self_kernel_.push_back(wl_kernel(f, f, false));
  const Eigen::MatrixXd kn = wl_kernel_matrix(features, true);

  auto evaluate = [&](const GPHyper& h, Eigen::LLT<Eigen::MatrixXd>& llt,
                      Eigen::VectorXd& alpha, double& lml) {
    Eigen::MatrixXd k = h.signal_variance * kn;
    k.diagonal().array() += h.noise_variance;
    llt.compute(k);
    if (llt.info() != Eigen::Success) return false;
    alpha = llt.solve(model.scores_);
    const Eigen::MatrixXd l = llt.matrixL();
    lml = -0.5 * model.scores_.dot(alpha) - l.diagonal().array().log().sum() -
          0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    return std::isfinite(lml);
  };

  if (fixed_hyper) {
    if (!(fixed_hyper->signal_variance > 0.0) || !(fixed_hyper->noise_variance > 0.0)) {
      throw InvalidArgument("gp_fit: hyperparameters must be positive");
    }
    model.hyper_ = *fixed_hyper;
    if (!evaluate(model.hyper_, model.chol_, model.alpha_, model.log_marginal_likelihood_)) {
      throw RuntimeError("gp_fit: K + noise*I is not positive definite (signal " +
                         std::to_string(fixed_hyper->signal_variance) + ", noise " +
                         std::to_string(fixed_hyper->noise_variance) + ")");
    }
    return model;
  }

  for (const GPHyper& h : hyper_grid(scores)) {
    GridPoint point;
    point.hyper = h;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd alpha;
    double lml = 0.0;
    point.feasible = evaluate(h, llt, alpha, lml);
    point.log_marginal_likelihood = lml;
    model.grid_.push_back(point);
    if (point.feasible &&
        (model.selected_ < 0 || lml > model.grid_[model.selected_].log_marginal_likelihood)) {
      model.selected_ = static_cast<int>(model.grid_.size()) - 1;
      model.hyper_ = h;
      model.chol_ = llt;
      model.alpha_ = alpha;
      model.log_marginal_likelihood_ = lml;
    }
  }
  if (model.selected_ < 0) {
    throw RuntimeError("gp_fit: K + noise*I is not positive definite at any grid point (" +
                       std::to_string(n) + " training points)");
  }
  return model;
}

GPPrediction GPModel::predict(const WLFeatureVector& query) const {
  const auto n = static_cast<Eigen::Index>(features_.size());
  Eigen::VectorXd kstar(n);
  const double kqq = wl_kernel(query, query, false);
  if (kqq <= 0.0) throw InvalidArgument("gp_predict: empty query feature vector");
  for (Eigen::Index i = 0; i < n; ++i) {
    kstar(i) = hyper_.signal_variance * wl_kernel(query, features_[i], false) /
               std::sqrt(kqq * self_kernel_[i]);
  }
  GPPrediction p;
  p.mean = kstar.dot(alpha_);
  const Eigen::VectorXd v = chol_.matrixL().solve(kstar);
  double var = hyper_.signal_variance - v.squaredNorm();
  if (var < 0.0) {
    if (var < -1e-8) {
      NASVAD_LOG(kWarning, "gp_predict: predictive variance " << var << " clamped to 0");
    }
    var = 0.0;
  }
  p.variance = var;
  return p;
}

double expected_improvement(double mean, double variance, double incumbent_best, double xi) {
  if (variance < 0.0) throw InvalidArgument("expected_improvement: negative variance");
  const double improvement = mean - incumbent_best - xi;
  const double sigma = std::sqrt(variance);
  if (sigma == 0.0) return std::max(0.0, improvement);
  const double z = improvement / sigma;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, improvement * cdf + sigma * pdf);
}

}  // namespace nasvad
