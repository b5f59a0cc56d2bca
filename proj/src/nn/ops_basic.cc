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
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "nn/ops.h"
#include "nn/ops_internal.h"

namespace nasvad::nn {

using internal::parent_grad;
using internal::parent_value;
using internal::require_rank;
using internal::require_same_shape;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

Var add(const Var& a, const Var& b) {
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  out.add_(b.value());
  return make_result(std::move(out), {a, b}, [](Node& self) {
    for (size_t i = 0; i < 2; ++i) {
      if (Tensor* g = parent_grad(self, i)) g->add_(self.grad);
    }
  });
}

Var add_n(std::span<const Var> terms) {
  if (terms.empty()) throw InvalidArgument("add_n: no terms");
  if (terms.size() == 1) return terms[0];
  Tensor out = terms[0].value();
  for (size_t i = 1; i < terms.size(); ++i) {
    require_same_shape(terms[0], terms[i], "add_n");
    out.add_(terms[i].value());
  }
  return make_result(std::move(out), {terms.begin(), terms.end()}, [](Node& self) {
    for (size_t i = 0; i < self.parents.size(); ++i) {
      if (Tensor* g = parent_grad(self, i)) g->add_(self.grad);
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape(a, b, "mul");
  Tensor out(a.shape());
  const int64_t n = out.numel();
  for (int64_t i = 0; i < n; ++i) out[i] = a.value()[i] * b.value()[i];
  return make_result(std::move(out), {a, b}, [](Node& self) {
    const Tensor& g = self.grad;
    const int64_t n = g.numel();
    if (Tensor* ga = parent_grad(self, 0)) {
      const Tensor& bv = parent_value(self, 1);
      for (int64_t i = 0; i < n; ++i) (*ga)[i] += g[i] * bv[i];
    }
    if (Tensor* gb = parent_grad(self, 1)) {
      const Tensor& av = parent_value(self, 0);
      for (int64_t i = 0; i < n; ++i) (*gb)[i] += g[i] * av[i];
    }
  });
}

Var gelu(const Var& x) {
  Tensor out(x.shape());
  const Tensor& xv = x.value();
  const int64_t n = out.numel();
  for (int64_t i = 0; i < n; ++i) {
    out[i] = 0.5 * xv[i] * std::erfc(-xv[i] / std::numbers::sqrt2);
  }
  return make_result(std::move(out), {x}, [](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    if (!gx) return;
    const Tensor& xv = parent_value(self, 0);
    const Tensor& g = self.grad;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const int64_t n = g.numel();
    for (int64_t i = 0; i < n; ++i) {
      const double v = xv[i];
      const double cdf = 0.5 * std::erfc(-v / std::numbers::sqrt2);
      const double pdf = inv_sqrt_2pi * std::exp(-0.5 * v * v);
      (*gx)[i] += g[i] * (cdf + v * pdf);
    }
  });
}

namespace {
inline double sigmoid_scalar(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}
}  // namespace

Var sigmoid(const Var& x) {
  Tensor out(x.shape());
  const int64_t n = out.numel();
  for (int64_t i = 0; i < n; ++i) out[i] = sigmoid_scalar(x.value()[i]);
  return make_result(std::move(out), {x}, [](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    if (!gx) return;
    const Tensor& y = self.value;
    const Tensor& g = self.grad;
    const int64_t n = g.numel();
    for (int64_t i = 0; i < n; ++i) (*gx)[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var zeros(const Shape& shape) { return Var(Tensor(shape, 0.0), false); }

Var avg_pool_feature2(const Var& x) {
  require_rank(x, 4, "avg_pool_feature2");
  const Shape& s = x.shape();
  const int64_t rows = s[0] * s[1] * s[2];
  const int64_t f_in = s[3];
  const int64_t f_out = (f_in + 1) / 2;
  Tensor out({s[0], s[1], s[2], f_out});
  const double* xv = x.value().data();
  double* ov = out.data();
  for (int64_t r = 0; r < rows; ++r) {
    const double* xr = xv + r * f_in;
    double* orow = ov + r * f_out;
    for (int64_t f = 0; f < f_out; ++f) {
      const int64_t a = 2 * f;
      orow[f] = (a + 1 < f_in) ? 0.5 * (xr[a] + xr[a + 1]) : xr[a];
    }
  }
  return make_result(std::move(out), {x}, [rows, f_in, f_out](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    if (!gx) return;
    const double* g = self.grad.data();
    double* gxv = gx->data();
    for (int64_t r = 0; r < rows; ++r) {
      for (int64_t f = 0; f < f_out; ++f) {
        const int64_t a = 2 * f;
        const double gv = g[r * f_out + f];
        if (a + 1 < f_in) {
          gxv[r * f_in + a] += 0.5 * gv;
          gxv[r * f_in + a + 1] += 0.5 * gv;
        } else {
          gxv[r * f_in + a] += gv;
        }
      }
    }
  });
}

Var global_avg_pool(const Var& x) {
  require_rank(x, 4, "global_avg_pool");
  const Shape& s = x.shape();
  const int64_t bc = s[0] * s[1];
  const int64_t p = s[2] * s[3];
  Tensor out({s[0], s[1]});
  const double* xv = x.value().data();
  for (int64_t i = 0; i < bc; ++i) {
    double acc = 0.0;
    for (int64_t j = 0; j < p; ++j) acc += xv[i * p + j];
    out[i] = acc / static_cast<double>(p);
  }
  return make_result(std::move(out), {x}, [bc, p](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    if (!gx) return;
    const double inv = 1.0 / static_cast<double>(p);
    for (int64_t i = 0; i < bc; ++i) {
      const double g = self.grad[i] * inv;
      double* row = gx->data() + i * p;
      for (int64_t j = 0; j < p; ++j) row[j] += g;
    }
  });
}

Var linear(const Var& x, const Var& weight, const Var& bias) {
  require_rank(x, 2, "linear");
  require_rank(weight, 2, "linear");
  const int64_t batch = x.shape()[0];
  const int64_t in = x.shape()[1];
  const int64_t out_dim = weight.shape()[0];
  if (weight.shape()[1] != in) {
    throw InvalidArgument("linear: weight " + shape_str(weight.shape()) +
                          " does not accept input " + shape_str(x.shape()));
  }
  if (bias.defined() && bias.value().numel() != out_dim) {
    throw InvalidArgument("linear: bias size mismatch");
  }
  Tensor out({batch, out_dim});
  MutMap y(out.data(), batch, out_dim);
  y.noalias() = ConstMap(x.value().data(), batch, in) *
                ConstMap(weight.value().data(), out_dim, in).transpose();
  if (bias.defined()) {
    for (int64_t b = 0; b < batch; ++b) {
      for (int64_t o = 0; o < out_dim; ++o) y(b, o) += bias.value()[o];
    }
  }
  return make_result(std::move(out), {x, weight, bias}, [batch, in, out_dim](Node& self) {
    ConstMap g(self.grad.data(), batch, out_dim);
    if (Tensor* gx = parent_grad(self, 0)) {
      MutMap(gx->data(), batch, in).noalias() +=
          g * ConstMap(parent_value(self, 1).data(), out_dim, in);
    }
    if (Tensor* gw = parent_grad(self, 1)) {
      MutMap(gw->data(), out_dim, in).noalias() +=
          g.transpose() * ConstMap(parent_value(self, 0).data(), batch, in);
    }
    if (Tensor* gb = parent_grad(self, 2)) {
      for (int64_t b = 0; b < batch; ++b) {
        for (int64_t o = 0; o < out_dim; ++o) (*gb)[o] += g(b, o);
      }
    }
  });
}

Var scale_channels(const Var& x, const Var& gate) {
  require_rank(x, 4, "scale_channels");
  const Shape& s = x.shape();
  if (gate.shape() != Shape{s[0], s[1]}) {
    throw InvalidArgument("scale_channels: gate " + shape_str(gate.shape()) +
                          " does not match " + shape_str(s));
  }
  const int64_t bc = s[0] * s[1];
  const int64_t p = s[2] * s[3];
  Tensor out(s);
  for (int64_t i = 0; i < bc; ++i) {
    const double g = gate.value()[i];
    const double* xr = x.value().data() + i * p;
    double* orow = out.data() + i * p;
    for (int64_t j = 0; j < p; ++j) orow[j] = xr[j] * g;
  }
  return make_result(std::move(out), {x, gate}, [bc, p](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    Tensor* gg = parent_grad(self, 1);
    const Tensor& xv = parent_value(self, 0);
    const Tensor& gate_v = parent_value(self, 1);
    for (int64_t i = 0; i < bc; ++i) {
      const double* g = self.grad.data() + i * p;
      if (gx) {
        double* row = gx->data() + i * p;
        for (int64_t j = 0; j < p; ++j) row[j] += g[j] * gate_v[i];
      }
      if (gg) {
        const double* xr = xv.data() + i * p;
        double acc = 0.0;
        for (int64_t j = 0; j < p; ++j) acc += g[j] * xr[j];
        (*gg)[i] += acc;
      }
    }
  });
}

Var concat_channels(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidArgument("concat_channels: no inputs");
  const Shape& s0 = parts[0].shape();
  if (s0.size() != 4) throw InvalidArgument("concat_channels: expected rank-4 inputs");
  std::vector<int64_t> channels;
  int64_t total_c = 0;
  for (const Var& p : parts) {
    const Shape& s = p.shape();
    if (s.size() != 4 || s[0] != s0[0] || s[2] != s0[2] || s[3] != s0[3]) {
      throw InvalidArgument("concat_channels: incompatible shape " + shape_str(s));
    }
    channels.push_back(s[1]);
    total_c += s[1];
  }
  const int64_t batch = s0[0];
  const int64_t p = s0[2] * s0[3];
  Tensor out({batch, total_c, s0[2], s0[3]});
  for (int64_t b = 0; b < batch; ++b) {
    int64_t c_off = 0;
    for (size_t k = 0; k < parts.size(); ++k) {
      const double* src = parts[k].value().data() + b * channels[k] * p;
      std::copy(src, src + channels[k] * p, out.data() + (b * total_c + c_off) * p);
      c_off += channels[k];
    }
  }
  return make_result(std::move(out), {parts.begin(), parts.end()},
                     [channels, batch, total_c, p](Node& self) {
                       for (int64_t b = 0; b < batch; ++b) {
                         int64_t c_off = 0;
                         for (size_t k = 0; k < channels.size(); ++k) {
                           if (Tensor* g = parent_grad(self, k)) {
                             const double* src = self.grad.data() + (b * total_c + c_off) * p;
                             double* dst = g->data() + b * channels[k] * p;
                             for (int64_t i = 0; i < channels[k] * p; ++i) dst[i] += src[i];
                           }
                           c_off += channels[k];
                         }
                       }
                     });
}

Var glu_channels(const Var& x) {
  require_rank(x, 4, "glu_channels");
  const Shape& s = x.shape();
  if (s[1] % 2 != 0) throw InvalidArgument("glu_channels: odd channel count");
  const int64_t batch = s[0];
  const int64_t half = s[1] / 2;
  const int64_t block = half * s[2] * s[3];
  Tensor out({batch, half, s[2], s[3]});
  for (int64_t b = 0; b < batch; ++b) {
    const double* a = x.value().data() + b * 2 * block;
    const double* g = a + block;
    double* o = out.data() + b * block;
    for (int64_t i = 0; i < block; ++i) o[i] = a[i] * sigmoid_scalar(g[i]);
  }
  return make_result(std::move(out), {x}, [batch, block](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    if (!gx) return;
    const Tensor& xv = parent_value(self, 0);
    for (int64_t b = 0; b < batch; ++b) {
      const double* a = xv.data() + b * 2 * block;
      const double* gt = a + block;
      const double* go = self.grad.data() + b * block;
      double* da = gx->data() + b * 2 * block;
      double* dg = da + block;
      for (int64_t i = 0; i < block; ++i) {
        const double sg = sigmoid_scalar(gt[i]);
        da[i] += go[i] * sg;
        dg[i] += go[i] * a[i] * sg * (1.0 - sg);
      }
    }
  });
}

Var time_linear(const Var& x, const Var& weight, const Var& bias) {
  require_rank(x, 4, "time_linear");
  const Shape& s = x.shape();
  const int64_t batch = s[0], c = s[1], t = s[2], f = s[3];
  const int64_t k = weight.shape()[0];
  if (weight.value().rank() != 2 || weight.shape()[1] != c * f) {
    throw InvalidArgument("time_linear: weight " + shape_str(weight.shape()) +
                          " does not accept " + shape_str(s));
  }
  Tensor out({batch, t, k});
  RowMatrix flat(c * f, t);
  for (int64_t b = 0; b < batch; ++b) {
    const double* xb = x.value().data() + b * c * t * f;
    for (int64_t ci = 0; ci < c; ++ci) {
      for (int64_t ti = 0; ti < t; ++ti) {
        for (int64_t fi = 0; fi < f; ++fi) flat(ci * f + fi, ti) = xb[(ci * t + ti) * f + fi];
      }
    }
    MutMap y(out.data() + b * t * k, t, k);
    y.noalias() = flat.transpose() * ConstMap(weight.value().data(), k, c * f).transpose();
    if (bias.defined()) {
      for (int64_t ti = 0; ti < t; ++ti) {
        for (int64_t ki = 0; ki < k; ++ki) y(ti, ki) += bias.value()[ki];
      }
    }
  }
  return make_result(std::move(out), {x, weight, bias}, [batch, c, t, f, k](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    Tensor* gw = parent_grad(self, 1);
    Tensor* gb = parent_grad(self, 2);
    const Tensor& xv = parent_value(self, 0);
    ConstMap w(parent_value(self, 1).data(), k, c * f);
    RowMatrix flat(c * f, t);
    RowMatrix dflat(c * f, t);
    for (int64_t b = 0; b < batch; ++b) {
      ConstMap g(self.grad.data() + b * t * k, t, k);
      if (gw) {
        const double* xb = xv.data() + b * c * t * f;
        for (int64_t ci = 0; ci < c; ++ci) {
          for (int64_t ti = 0; ti < t; ++ti) {
            for (int64_t fi = 0; fi < f; ++fi) flat(ci * f + fi, ti) = xb[(ci * t + ti) * f + fi];
          }
        }
        MutMap(gw->data(), k, c * f).noalias() += g.transpose() * flat.transpose();
      }
      if (gb) {
        for (int64_t ti = 0; ti < t; ++ti) {
          for (int64_t ki = 0; ki < k; ++ki) (*gb)[ki] += g(ti, ki);
        }
      }
      if (gx) {
        dflat.noalias() = w.transpose() * g.transpose();
        double* dxb = gx->data() + b * c * t * f;
        for (int64_t ci = 0; ci < c; ++ci) {
          for (int64_t ti = 0; ti < t; ++ti) {
            for (int64_t fi = 0; fi < f; ++fi) dxb[(ci * t + ti) * f + fi] += dflat(ci * f + fi, ti);
          }
        }
      }
    }
  });
}

Var masked_bce_with_logits(const Var& logits, const Tensor& labels, const Tensor& mask) {
  if (labels.shape() != logits.shape() || mask.shape() != logits.shape()) {
    throw InvalidArgument("masked_bce_with_logits: logits " + shape_str(logits.shape()) +
                          ", labels " + shape_str(labels.shape()) + ", mask " +
                          shape_str(mask.shape()));
  }
  const Tensor& z = logits.value();
  const int64_t n = z.numel();
  double total = 0.0;
  double weight = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    if (mask[i] == 0.0) continue;
    const double zi = z[i];
    total += mask[i] * (std::max(zi, 0.0) - zi * labels[i] + std::log1p(std::exp(-std::abs(zi))));
    weight += mask[i];
  }
  Tensor out({1}, weight > 0.0 ? total / weight : 0.0);
  return make_result(std::move(out), {logits}, [labels, mask, weight](Node& self) {
    Tensor* gz = parent_grad(self, 0);
    if (!gz || weight <= 0.0) return;
    const Tensor& z = parent_value(self, 0);
    const double scale = self.grad[0] / weight;
    const int64_t n = z.numel();
    for (int64_t i = 0; i < n; ++i) {
      if (mask[i] == 0.0) continue;
      (*gz)[i] += scale * mask[i] * (sigmoid_scalar(z[i]) - labels[i]);
    }
  });
}

Var weighted_sum(const Var& x, const Tensor& weights) {
  if (weights.shape() != x.shape()) throw InvalidArgument("weighted_sum: shape mismatch");
  double acc = 0.0;
  const int64_t n = weights.numel();
  for (int64_t i = 0; i < n; ++i) acc += x.value()[i] * weights[i];
  return make_result(Tensor({1}, acc), {x}, [weights](Node& self) {
    Tensor* gx = parent_grad(self, 0);
    if (!gx) return;
    const double g = self.grad[0];
    const int64_t n = weights.numel();
    for (int64_t i = 0; i < n; ++i) (*gx)[i] += g * weights[i];
  });
}

}  // namespace nasvad::nn
