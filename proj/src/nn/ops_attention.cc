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

#include <Eigen/Dense>

#include "nn/ops.h"
#include "nn/ops_internal.h"

namespace nasvad::nn {

using internal::parent_grad;
using internal::parent_value;
using internal::require_rank;
using internal::require_same_shape;

namespace {

// Scores are held transposed, (keys x queries), so that every query's
// softmax runs over a contiguous column. Queries are processed in blocks to
// keep the score block cache resident.
constexpr Eigen::Index kQueryBlock = 32;

// Location of one token sequence inside a (B, C, T, F) buffer: element
// (channel c, token l) sits at base + c * channel_stride + l * token_stride.
struct SeqLayout {
  int64_t num_seq, length, channel_stride, token_stride;
  int64_t t, f, c;
  AttentionAxis axis;

  int64_t base(int64_t s) const {
    switch (axis) {
      case AttentionAxis::kTime: {
        const int64_t b = s / f;
        return b * c * t * f + (s % f);
      }
      case AttentionAxis::kFeature: {
        const int64_t b = s / t;
        return b * c * t * f + (s % t) * f;
      }
      default:
        return s * c * t * f;
    }
  }
};

SeqLayout make_layout(const Shape& s, AttentionAxis axis) {
  const int64_t b = s[0], c = s[1], t = s[2], f = s[3];
  switch (axis) {
    case AttentionAxis::kTime: return {b * f, t, t * f, f, t, f, c, axis};
    case AttentionAxis::kFeature: return {b * t, f, t * f, 1, t, f, c, axis};
    default: return {b, t * f, t * f, 1, t, f, c, axis};
  }
}

// (channels, length) column-major.
void gather(const double* src, const SeqLayout& lay, int64_t s, Eigen::MatrixXd& out) {
  out.resize(lay.c, lay.length);
  const double* base = src + lay.base(s);
  for (int64_t ch = 0; ch < lay.c; ++ch) {
    const double* p = base + ch * lay.channel_stride;
    for (int64_t l = 0; l < lay.length; ++l) out(ch, l) = p[l * lay.token_stride];
  }
}

void scatter_add(const Eigen::MatrixXd& m, const SeqLayout& lay, int64_t s, double* dst) {
  double* base = dst + lay.base(s);
  for (int64_t ch = 0; ch < lay.c; ++ch) {
    double* p = base + ch * lay.channel_stride;
    for (int64_t l = 0; l < lay.length; ++l) p[l * lay.token_stride] += m(ch, l);
  }
}

void softmax_cols(Eigen::MatrixXd& s) {
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    auto col = s.col(j);
    const double mx = col.maxCoeff();
    col = (col.array() - mx).exp();
    col /= col.sum();
  }
}

}  // namespace

Var multi_head_attention(const Var& q, const Var& k, const Var& v, int heads,
                         AttentionAxis axis) {
  require_rank(q, 4, "multi_head_attention");
  require_same_shape(q, k, "multi_head_attention");
  require_same_shape(q, v, "multi_head_attention");
  const Shape& s = q.shape();
  if (heads <= 0 || s[1] % heads != 0) {
    throw InvalidArgument("multi_head_attention: " + std::to_string(s[1]) +
                          " channels not divisible by " + std::to_string(heads) + " heads");
  }
  const SeqLayout lay = make_layout(s, axis);
  const Eigen::Index d = s[1] / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  Tensor out(s, 0.0);
  Eigen::MatrixXd qm, km, vm, om, kh, vh, st;
  for (int64_t seq = 0; seq < lay.num_seq; ++seq) {
    gather(q.value().data(), lay, seq, qm);
    gather(k.value().data(), lay, seq, km);
    gather(v.value().data(), lay, seq, vm);
    om.setZero(lay.c, lay.length);
    for (int h = 0; h < heads; ++h) {
      const Eigen::Index c0 = h * d;
      kh = scale * km.middleRows(c0, d).transpose();  // (L, d)
      vh = vm.middleRows(c0, d);                       // (d, L)
      for (Eigen::Index q0 = 0; q0 < lay.length; q0 += kQueryBlock) {
        const Eigen::Index n = std::min<Eigen::Index>(kQueryBlock, lay.length - q0);
        st.noalias() = kh * qm.block(c0, q0, d, n);
        softmax_cols(st);
        om.block(c0, q0, d, n).noalias() = vh * st;
      }
    }
    scatter_add(om, lay, seq, out.data());
  }

  return make_result(std::move(out), {q, k, v}, [lay, heads, d, scale](Node& self) {
    Tensor* gq = parent_grad(self, 0);
    Tensor* gk = parent_grad(self, 1);
    Tensor* gv = parent_grad(self, 2);
    Eigen::MatrixXd qm, km, vm, gom, dq, dk, dv, kh, vht, st, dpt;
    Eigen::RowVectorXd coldot;
    for (int64_t seq = 0; seq < lay.num_seq; ++seq) {
      gather(parent_value(self, 0).data(), lay, seq, qm);
      gather(parent_value(self, 1).data(), lay, seq, km);
      gather(parent_value(self, 2).data(), lay, seq, vm);
      gather(self.grad.data(), lay, seq, gom);
      dq.setZero(lay.c, lay.length);
      dk.setZero(lay.c, lay.length);
      dv.setZero(lay.c, lay.length);
      for (int h = 0; h < heads; ++h) {
        const Eigen::Index c0 = h * d;
        kh = scale * km.middleRows(c0, d).transpose();  // (L, d)
        vht = vm.middleRows(c0, d).transpose();         // (L, d)
        for (Eigen::Index q0 = 0; q0 < lay.length; q0 += kQueryBlock) {
          const Eigen::Index n = std::min<Eigen::Index>(kQueryBlock, lay.length - q0);
          const auto qb = qm.block(c0, q0, d, n);
          const auto go = gom.block(c0, q0, d, n);
          st.noalias() = kh * qb;  // (L, n)
          softmax_cols(st);
          dv.middleRows(c0, d).noalias() += go * st.transpose();
          dpt.noalias() = vht * go;  // (L, n)
          coldot = (dpt.array() * st.array()).colwise().sum();
          dpt = st.array() * (dpt.rowwise() - coldot).array();
          dq.block(c0, q0, d, n).noalias() += kh.transpose() * dpt;
          dk.middleRows(c0, d).noalias() += scale * qb * dpt.transpose();
        }
      }
      if (gq) scatter_add(dq, lay, seq, gq->data());
      if (gk) scatter_add(dk, lay, seq, gk->data());
      if (gv) scatter_add(dv, lay, seq, gv->data());
    }
  });
}

}  // namespace nasvad::nn
