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

#include <algorithm>

#include <Eigen/Dense>

#include "nn/ops.h"
#include "nn/ops_internal.h"

namespace nasvad::nn {

using internal::parent_grad;
using internal::parent_value;
using internal::require_rank;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

struct ConvGeom {
  int64_t batch, c_in, c_out, t, f, k, pad;
  int64_t plane() const { return t * f; }
};

// cols: (c_in * k * k, t * f) patches of one batch item.
void im2col(const double* x, const ConvGeom& g, RowMatrix& cols) {
  cols.resize(g.c_in * g.k * g.k, g.plane());
  for (int64_t c = 0; c < g.c_in; ++c) {
    const double* xc = x + c * g.plane();
    for (int64_t dt = 0; dt < g.k; ++dt) {
      for (int64_t df = 0; df < g.k; ++df) {
        double* row = cols.data() + ((c * g.k + dt) * g.k + df) * g.plane();
        const int64_t ot = dt - g.pad;
        const int64_t of = df - g.pad;
        for (int64_t t = 0; t < g.t; ++t) {
          const int64_t st = t + ot;
          double* r = row + t * g.f;
          if (st < 0 || st >= g.t) {
            std::fill(r, r + g.f, 0.0);
            continue;
          }
          const double* src = xc + st * g.f;
          for (int64_t f = 0; f < g.f; ++f) {
            const int64_t sf = f + of;
            r[f] = (sf >= 0 && sf < g.f) ? src[sf] : 0.0;
          }
        }
      }
    }
  }
}

void col2im_add(const RowMatrix& cols, const ConvGeom& g, double* dx) {
  for (int64_t c = 0; c < g.c_in; ++c) {
    double* xc = dx + c * g.plane();
    for (int64_t dt = 0; dt < g.k; ++dt) {
      for (int64_t df = 0; df < g.k; ++df) {
        const double* row = cols.data() + ((c * g.k + dt) * g.k + df) * g.plane();
        const int64_t ot = dt - g.pad;
        const int64_t of = df - g.pad;
        for (int64_t t = 0; t < g.t; ++t) {
          const int64_t st = t + ot;
          if (st < 0 || st >= g.t) continue;
          const double* r = row + t * g.f;
          double* dst = xc + st * g.f;
          const int64_t f_lo = std::max<int64_t>(0, -of);
          const int64_t f_hi = std::min<int64_t>(g.f, g.f - of);
          for (int64_t f = f_lo; f < f_hi; ++f) dst[f + of] += r[f];
        }
      }
    }
  }
}

// Depthwise forward for one (batch, channel) plane.
void depthwise_plane(const double* x, const double* w, double* y, const ConvGeom& g) {
  for (int64_t dt = 0; dt < g.k; ++dt) {
    const int64_t ot = dt - g.pad;
    const int64_t t_lo = std::max<int64_t>(0, -ot);
    const int64_t t_hi = std::min<int64_t>(g.t, g.t - ot);
    for (int64_t df = 0; df < g.k; ++df) {
      const int64_t of = df - g.pad;
      const int64_t f_lo = std::max<int64_t>(0, -of);
      const int64_t f_hi = std::min<int64_t>(g.f, g.f - of);
      const double wv = w[dt * g.k + df];
      for (int64_t t = t_lo; t < t_hi; ++t) {
        double* yr = y + t * g.f;
        const double* xr = x + (t + ot) * g.f + of;
        for (int64_t f = f_lo; f < f_hi; ++f) yr[f] += wv * xr[f];
      }
    }
  }
}

void depthwise_plane_backward(const double* x, const double* w, const double* gy, double* gx,
                              double* gw, const ConvGeom& g) {
  for (int64_t dt = 0; dt < g.k; ++dt) {
    const int64_t ot = dt - g.pad;
    const int64_t t_lo = std::max<int64_t>(0, -ot);
    const int64_t t_hi = std::min<int64_t>(g.t, g.t - ot);
    for (int64_t df = 0; df < g.k; ++df) {
      const int64_t of = df - g.pad;
      const int64_t f_lo = std::max<int64_t>(0, -of);
      const int64_t f_hi = std::min<int64_t>(g.f, g.f - of);
      const double wv = w[dt * g.k + df];
      double acc = 0.0;
      for (int64_t t = t_lo; t < t_hi; ++t) {
        const double* gr = gy + t * g.f;
        const double* xr = x + (t + ot) * g.f + of;
        if (gx) {
          double* gxr = gx + (t + ot) * g.f + of;
          for (int64_t f = f_lo; f < f_hi; ++f) gxr[f] += wv * gr[f];
        }
        for (int64_t f = f_lo; f < f_hi; ++f) acc += gr[f] * xr[f];
      }
      if (gw) gw[dt * g.k + df] += acc;
    }
  }
}

}  // namespace

Var conv2d(const Var& x, const Var& weight, const Var& bias, int groups) {
  require_rank(x, 4, "conv2d");
  require_rank(weight, 4, "conv2d");
  const Shape& xs = x.shape();
  const Shape& ws = weight.shape();
  ConvGeom g{xs[0], xs[1], ws[0], xs[2], xs[3], ws[2], ws[2] / 2};
  if (ws[2] != ws[3] || ws[2] % 2 == 0) {
    throw InvalidArgument("conv2d: kernel must be square and odd, got " + shape_str(ws));
  }
  const bool depthwise = groups != 1;
  if (depthwise) {
    if (groups != g.c_in || g.c_out != g.c_in || ws[1] != 1) {
      throw InvalidArgument("conv2d: only groups == 1 or depthwise convolution is supported");
    }
  } else if (ws[1] != g.c_in) {
    throw InvalidArgument("conv2d: weight " + shape_str(ws) + " expects " +
                          std::to_string(ws[1]) + " input channels, input is " + shape_str(xs));
  }
  if (bias.defined() && bias.value().numel() != g.c_out) {
    throw InvalidArgument("conv2d: bias size mismatch");
  }

  const int64_t p = g.plane();
  Tensor out({g.batch, g.c_out, g.t, g.f}, 0.0);
  const double* xv = x.value().data();
  const double* wv = weight.value().data();
  if (depthwise) {
    for (int64_t b = 0; b < g.batch; ++b) {
      for (int64_t c = 0; c < g.c_in; ++c) {
        depthwise_plane(xv + (b * g.c_in + c) * p, wv + c * g.k * g.k,
                        out.data() + (b * g.c_out + c) * p, g);
      }
    }
  } else if (g.k == 1) {
    ConstMap w(wv, g.c_out, g.c_in);
    for (int64_t b = 0; b < g.batch; ++b) {
      MutMap(out.data() + b * g.c_out * p, g.c_out, p).noalias() =
          w * ConstMap(xv + b * g.c_in * p, g.c_in, p);
    }
  } else {
    ConstMap w(wv, g.c_out, g.c_in * g.k * g.k);
    RowMatrix cols;
    for (int64_t b = 0; b < g.batch; ++b) {
      im2col(xv + b * g.c_in * p, g, cols);
      MutMap(out.data() + b * g.c_out * p, g.c_out, p).noalias() = w * cols;
    }
  }
  if (bias.defined()) {
    for (int64_t b = 0; b < g.batch; ++b) {
      for (int64_t c = 0; c < g.c_out; ++c) {
        const double bv = bias.value()[c];
        double* row = out.data() + (b * g.c_out + c) * p;
        for (int64_t i = 0; i < p; ++i) row[i] += bv;
      }
    }
  }

  return make_result(std::move(out), {x, weight, bias}, [g, depthwise](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    Tensor* gw = parent_grad(self, 1);
    Tensor* gb = parent_grad(self, 2);
    const Tensor& xv = parent_value(self, 0);
    const Tensor& wv = parent_value(self, 1);
    const double* gy = self.grad.data();
    const int64_t p = g.plane();

    if (gb) {
      for (int64_t b = 0; b < g.batch; ++b) {
        for (int64_t c = 0; c < g.c_out; ++c) {
          const double* row = gy + (b * g.c_out + c) * p;
          double acc = 0.0;
          for (int64_t i = 0; i < p; ++i) acc += row[i];
          (*gb)[c] += acc;
        }
      }
    }
    if (!gx && !gw) return;

    if (depthwise) {
      for (int64_t b = 0; b < g.batch; ++b) {
        for (int64_t c = 0; c < g.c_in; ++c) {
          const int64_t off = (b * g.c_in + c) * p;
          depthwise_plane_backward(xv.data() + off, wv.data() + c * g.k * g.k, gy + off,
                                   gx ? gx->data() + off : nullptr,
                                   gw ? gw->data() + c * g.k * g.k : nullptr, g);
        }
      }
    } else if (g.k == 1) {
      ConstMap w(wv.data(), g.c_out, g.c_in);
      for (int64_t b = 0; b < g.batch; ++b) {
        ConstMap dy(gy + b * g.c_out * p, g.c_out, p);
        if (gw) {
          MutMap(gw->data(), g.c_out, g.c_in).noalias() +=
              dy * ConstMap(xv.data() + b * g.c_in * p, g.c_in, p).transpose();
        }
        if (gx) MutMap(gx->data() + b * g.c_in * p, g.c_in, p).noalias() += w.transpose() * dy;
      }
    } else {
      const int64_t kk = g.c_in * g.k * g.k;
      ConstMap w(wv.data(), g.c_out, kk);
      RowMatrix cols;
      RowMatrix dcols;
      for (int64_t b = 0; b < g.batch; ++b) {
        ConstMap dy(gy + b * g.c_out * p, g.c_out, p);
        if (gw) {
          im2col(xv.data() + b * g.c_in * p, g, cols);
          MutMap(gw->data(), g.c_out, kk).noalias() += dy * cols.transpose();
        }
        if (gx) {
          dcols.noalias() = w.transpose() * dy;
          col2im_add(dcols, g, gx->data() + b * g.c_in * p);
        }
      }
    }
  });
}

}  // namespace nasvad::nn
