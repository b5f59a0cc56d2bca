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

#ifndef NASVAD_TESTS_SUPPORT_TEST_SUPPORT_H_
#define NASVAD_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "arch/arch_spec.h"
#include "arch/op_kind.h"
#include "arch/wl.h"
#include "eval/metrics.h"
#include "nn/autograd.h"
#include "nn/layers.h"
#include "nn/tensor.h"
#include "surrogate/gp.h"

namespace nasvad::testing {

// Fresh empty directory under the system temp dir.
std::string make_temp_dir(const std::string& tag);

nn::Tensor random_tensor(const nn::Shape& shape, uint64_t seed, double scale = 1.0);

// |a - n| / max(|a|, |n|, floor).
double grad_rel_error(double analytic, double numeric, double floor);

struct GradLeaf {
  std::string name;
  nn::Var var;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  int64_t coords = 0;
  std::string worst;  // leaf[index] with the largest error
};

struct GradCheckOptions {
  double step = 1e-4;
  double floor = 1e-3;
  // Coordinates probed per leaf; < 0 probes every coordinate.
  int max_coords_per_leaf = -1;
  uint64_t seed = 0;
};

// Central differences on every probed coordinate of every leaf against one
// reverse-mode pass of `loss`.
GradCheckReport check_gradients(const std::function<nn::Var()>& loss,
                                const std::vector<GradLeaf>& leaves,
                                const GradCheckOptions& options = {});

std::vector<GradLeaf> parameter_leaves(const nn::ParameterStore& store);

// One search op on a (B, C, T, F) input, reduced by a random weighted sum.
GradCheckReport check_op_gradients(OpKind kind, int batch, int channels, int time, int features,
                                   bool training, uint64_t seed,
                                   const GradCheckOptions& options = {});

// The whole model on a (B, 1, window, mel) input.
GradCheckReport check_model_gradients(const ArchSpec& arch, int batch, uint64_t seed,
                                      const GradCheckOptions& options);

// Feature-map dot product written against the label strings directly.
double brute_wl_kernel(const WLFeatureVector& a, const WLFeatureVector& b);

// GP posterior with an explicit normalized Gram matrix and a full-pivot LU
// solve.
GPPrediction dense_gp_predict(const std::vector<WLFeatureVector>& train,
                              const std::vector<double>& scores, const GPHyper& hyper,
                              const WLFeatureVector& query);

// E[max(0, Y - best - xi)] for Y ~ N(mean, variance) by composite Simpson.
double ei_by_integration(double mean, double variance, double best, double xi);

// Fraction of (positive, negative) pairs ordered correctly, ties count half.
double auc_by_pairs(const std::vector<double>& scores, const std::vector<uint8_t>& labels);

// For every frame, collects the matching outputs of every window.
eval::BoostedScores boost_by_gathering(const eval::PredictionSet& raw, int64_t num_frames);

// Small valid macro skeleton for fast tests.
ArchSpec tiny_arch(const CellSpec& cell, int channels = 8, int mel = 10, int window = 6);

}  // namespace nasvad::testing

#endif  // NASVAD_TESTS_SUPPORT_TEST_SUPPORT_H_
