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
#include <vector>

#include "nn/ops.h"
#include "nn/ops_internal.h"

namespace nasvad::nn {

using internal::parent_grad;
using internal::parent_value;
using internal::require_rank;

Var batch_norm(const Var& x, const Var& gamma, const Var& beta, BatchNormState& state,
               bool training, double momentum, double eps) {
  require_rank(x, 4, "batch_norm");
  const Shape& s = x.shape();
  const int64_t batch = s[0], channels = s[1], p = s[2] * s[3];
  if (gamma.value().numel() != channels || beta.value().numel() != channels ||
      state.running_mean.numel() != channels || state.running_var.numel() != channels) {
    throw InvalidArgument("batch_norm: parameters do not match " + std::to_string(channels) +
                          " channels");
  }
  const double count = static_cast<double>(batch * p);
  const double* xv = x.value().data();

  std::vector<double> mean(static_cast<size_t>(channels));
  std::vector<double> inv_std(static_cast<size_t>(channels));
  if (training) {
    for (int64_t c = 0; c < channels; ++c) {
      double m = 0.0;
      for (int64_t b = 0; b < batch; ++b) {
        const double* row = xv + (b * channels + c) * p;
        for (int64_t i = 0; i < p; ++i) m += row[i];
      }
      m /= count;
      double v = 0.0;
      for (int64_t b = 0; b < batch; ++b) {
        const double* row = xv + (b * channels + c) * p;
        for (int64_t i = 0; i < p; ++i) v += (row[i] - m) * (row[i] - m);
      }
      v /= count;
      mean[c] = m;
      inv_std[c] = 1.0 / std::sqrt(v + eps);
      const double unbiased = count > 1.0 ? v * count / (count - 1.0) : v;
      state.running_mean[c] = (1.0 - momentum) * state.running_mean[c] + momentum * m;
      state.running_var[c] = (1.0 - momentum) * state.running_var[c] + momentum * unbiased;
    }
  } else {
    for (int64_t c = 0; c < channels; ++c) {
      mean[c] = state.running_mean[c];
      inv_std[c] = 1.0 / std::sqrt(state.running_var[c] + eps);
    }
  }

  Tensor out(s);
  for (int64_t b = 0; b < batch; ++b) {
    for (int64_t c = 0; c < channels; ++c) {
      const double scale = gamma.value()[c] * inv_std[c];
      const double shift = beta.value()[c] - mean[c] * scale;
      const double* row = xv + (b * channels + c) * p;
      double* orow = out.data() + (b * channels + c) * p;
      for (int64_t i = 0; i < p; ++i) orow[i] = row[i] * scale + shift;
    }
  }

  return make_result(std::move(out), {x, gamma, beta},
                     [batch, channels, p, count, training, mean = std::move(mean),
                      inv_std = std::move(inv_std)](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    Tensor* gg = parent_grad(self, 1);
    Tensor* gbeta = parent_grad(self, 2);
    const double* xv = parent_value(self, 0).data();
    const Tensor& gamma = parent_value(self, 1);
    const double* gy = self.grad.data();
    for (int64_t c = 0; c < channels; ++c) {
      double sum_g = 0.0;
      double sum_gxhat = 0.0;
      for (int64_t b = 0; b < batch; ++b) {
        const double* row = xv + (b * channels + c) * p;
        const double* grow = gy + (b * channels + c) * p;
        for (int64_t i = 0; i < p; ++i) {
          sum_g += grow[i];
          sum_gxhat += grow[i] * (row[i] - mean[c]) * inv_std[c];
        }
      }
      if (gg) (*gg)[c] += sum_gxhat;
      if (gbeta) (*gbeta)[c] += sum_g;
      if (!gx) continue;
      const double scale = gamma[c] * inv_std[c];
      for (int64_t b = 0; b < batch; ++b) {
        const double* row = xv + (b * channels + c) * p;
        const double* grow = gy + (b * channels + c) * p;
        double* dx = gx->data() + (b * channels + c) * p;
        if (training) {
          const double mg = sum_g / count;
          const double mgx = sum_gxhat / count;
          for (int64_t i = 0; i < p; ++i) {
            const double xhat = (row[i] - mean[c]) * inv_std[c];
            dx[i] += scale * (grow[i] - mg - xhat * mgx);
          }
        } else {
          for (int64_t i = 0; i < p; ++i) dx[i] += scale * grow[i];
        }
      }
    }
  });
}

Var layer_norm_channels(const Var& x, const Var& gamma, const Var& beta, double eps) {
  require_rank(x, 4, "layer_norm_channels");
  const Shape& s = x.shape();
  const int64_t batch = s[0], channels = s[1], p = s[2] * s[3];
  if (gamma.value().numel() != channels || beta.value().numel() != channels) {
    throw InvalidArgument("layer_norm_channels: parameters do not match " +
                          std::to_string(channels) + " channels");
  }
  const double* xv = x.value().data();
  Tensor out(s);
  // Per-position statistics, kept for backward.
  std::vector<double> mean(static_cast<size_t>(batch * p), 0.0);
  std::vector<double> inv_std(static_cast<size_t>(batch * p), 0.0);
  const double inv_c = 1.0 / static_cast<double>(channels);
  for (int64_t b = 0; b < batch; ++b) {
    double* m = mean.data() + b * p;
    double* is = inv_std.data() + b * p;
    for (int64_t c = 0; c < channels; ++c) {
      const double* row = xv + (b * channels + c) * p;
      for (int64_t i = 0; i < p; ++i) m[i] += row[i];
    }
    for (int64_t i = 0; i < p; ++i) m[i] *= inv_c;
    for (int64_t c = 0; c < channels; ++c) {
      const double* row = xv + (b * channels + c) * p;
      for (int64_t i = 0; i < p; ++i) is[i] += (row[i] - m[i]) * (row[i] - m[i]);
    }
    for (int64_t i = 0; i < p; ++i) is[i] = 1.0 / std::sqrt(is[i] * inv_c + eps);
    for (int64_t c = 0; c < channels; ++c) {
      const double* row = xv + (b * channels + c) * p;
      double* orow = out.data() + (b * channels + c) * p;
      const double gm = gamma.value()[c];
      const double bt = beta.value()[c];
      for (int64_t i = 0; i < p; ++i) orow[i] = (row[i] - m[i]) * is[i] * gm + bt;
    }
  }

  return make_result(std::move(out), {x, gamma, beta},
                     [batch, channels, p, inv_c, mean = std::move(mean),
                      inv_std = std::move(inv_std)](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    Tensor* gg = parent_grad(self, 1);
    Tensor* gbeta = parent_grad(self, 2);
    const double* xv = parent_value(self, 0).data();
    const Tensor& gamma = parent_value(self, 1);
    const double* gy = self.grad.data();
    std::vector<double> mg(static_cast<size_t>(p));
    std::vector<double> mgx(static_cast<size_t>(p));
    for (int64_t b = 0; b < batch; ++b) {
      const double* m = mean.data() + b * p;
      const double* is = inv_std.data() + b * p;
      std::fill(mg.begin(), mg.end(), 0.0);
      std::fill(mgx.begin(), mgx.end(), 0.0);
      for (int64_t c = 0; c < channels; ++c) {
        const double* row = xv + (b * channels + c) * p;
        const double* grow = gy + (b * channels + c) * p;
        const double gm = gamma[c];
        double sg = 0.0;
        double sgx = 0.0;
        for (int64_t i = 0; i < p; ++i) {
          const double xhat = (row[i] - m[i]) * is[i];
          const double g = grow[i] * gm;
          mg[i] += g;
          mgx[i] += g * xhat;
          sg += grow[i];
          sgx += grow[i] * xhat;
        }
        if (gg) (*gg)[c] += sgx;
        if (gbeta) (*gbeta)[c] += sg;
      }
      if (!gx) continue;
      for (int64_t c = 0; c < channels; ++c) {
        const double* row = xv + (b * channels + c) * p;
        const double* grow = gy + (b * channels + c) * p;
        double* dx = gx->data() + (b * channels + c) * p;
        const double gm = gamma[c];
        for (int64_t i = 0; i < p; ++i) {
          const double xhat = (row[i] - m[i]) * is[i];
          dx[i] += is[i] * (grow[i] * gm - mg[i] * inv_c - xhat * mgx[i] * inv_c);
        }
      }
    }
  });
}

}  // namespace nasvad::nn
