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

#ifndef NASVAD_SURROGATE_GP_H_
#define NASVAD_SURROGATE_GP_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "arch/wl.h"

namespace nasvad {

// Sparse dot product of label counts; the normalized form divides by the
// geometric mean of the self-kernels and lies in [0, 1].
double wl_kernel(const WLFeatureVector& a, const WLFeatureVector& b, bool normalized);

Eigen::MatrixXd wl_kernel_matrix(std::span<const WLFeatureVector> features, bool normalized);

struct GPHyper {
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
};

struct GridPoint {
  GPHyper hyper;
  bool feasible = false;  // Cholesky of K + noise*I succeeded
  double log_marginal_likelihood = 0.0;
};

struct GPPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Zero-mean GP with covariance signal_variance * normalized WL kernel.
// Immutable after gp_fit().
class GPModel {
 public:
  const std::vector<WLFeatureVector>& training_features() const { return features_; }
  const Eigen::VectorXd& training_scores() const { return scores_; }
  double signal_variance() const { return hyper_.signal_variance; }
  double noise_variance() const { return hyper_.noise_variance; }
  GPHyper hyper() const { return hyper_; }
  double log_marginal_likelihood() const { return log_marginal_likelihood_; }

  // Empty when hyperparameters were fixed by the caller.
  const std::vector<GridPoint>& grid() const { return grid_; }
  // Index into grid() of the winning point, -1 when fixed.
  int selected_grid_index() const { return selected_; }

  GPPrediction predict(const WLFeatureVector& query) const;

 private:
  friend GPModel gp_fit(std::span<const WLFeatureVector>, std::span<const double>,
                        std::optional<GPHyper>);

  std::vector<WLFeatureVector> features_;
  std::vector<double> self_kernel_;
  Eigen::VectorXd scores_;
  GPHyper hyper_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
  double log_marginal_likelihood_ = 0.0;
  std::vector<GridPoint> grid_;
  int selected_ = -1;
};

// Without fixed_hyper the hyperparameters maximize the log marginal likelihood
// over signal in {0.25, 0.5, 1, 2, 4} x (sample variance of scores) and noise
// in 11 log-spaced values from 1e-6 to 1e-1.
GPModel gp_fit(std::span<const WLFeatureVector> features, std::span<const double> scores,
               std::optional<GPHyper> fixed_hyper = std::nullopt);

inline GPPrediction gp_predict(const GPModel& model, const WLFeatureVector& query) {
  return model.predict(query);
}

// The hyperparameter grid gp_fit searches for the given scores.
std::vector<GPHyper> hyper_grid(std::span<const double> scores);

// EI for maximization with exploration margin xi.
double expected_improvement(double mean, double variance, double incumbent_best, double xi);

}  // namespace nasvad

#endif  // NASVAD_SURROGATE_GP_H_
