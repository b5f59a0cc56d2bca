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

#include "arch/wl.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "common/error.h"
#include "common/hash.h"

namespace nasvad {

int64_t WLFeatureVector::total() const {
  int64_t t = 0;
  for (const auto& [label, count] : counts) t += count;
  return t;
}

WLFeatureVector wl_features(const CellSpec& cell, int depth) {
  if (depth < 0) throw InvalidArgument("wl_features: depth must be >= 0");

  // Graph: 5 cell nodes followed by one op node per edge.
  const size_t n_nodes = kNumCellNodes + cell.edges.size();
  std::vector<std::string> labels(n_nodes);
  std::vector<std::vector<size_t>> in_neighbors(n_nodes);
  labels[0] = "IN1";
  labels[1] = "IN2";
  for (int n = kNumInputNodes; n < kNumCellNodes; ++n) labels[n] = "ADD";
  for (size_t i = 0; i < cell.edges.size(); ++i) {
    const size_t op_node = kNumCellNodes + i;
    labels[op_node] = std::string(op_name(cell.edges[i].op));
    in_neighbors[op_node].push_back(static_cast<size_t>(cell.edges[i].source));
    in_neighbors[static_cast<size_t>(cell.edges[i].target)].push_back(op_node);
  }

  WLFeatureVector out;
  out.depth = depth;
  for (const auto& l : labels) ++out.counts[l];

  std::vector<std::string> next(n_nodes);
  std::vector<std::string> neigh;
  for (int it = 1; it <= depth; ++it) {
    for (size_t v = 0; v < n_nodes; ++v) {
      neigh.clear();
      for (size_t u : in_neighbors[v]) neigh.push_back(labels[u]);
      std::sort(neigh.begin(), neigh.end());
      std::string l = "(" + labels[v] + "|";
      for (size_t k = 0; k < neigh.size(); ++k) {
        if (k) l += ',';
        l += neigh[k];
      }
      l += ')';
      next[v] = std::move(l);
    }
    labels.swap(next);
    for (const auto& l : labels) ++out.counts[l];
  }
  return out;
}

namespace {

std::string edge_list_string(std::vector<std::array<int, 3>> edges) {
  std::sort(edges.begin(), edges.end());
  std::string s;
  for (const auto& e : edges) {
    s += std::to_string(e[0]) + ">" + std::to_string(e[1]) + ":" +
         std::string(op_name(static_cast<OpKind>(e[2]))) + ";";
  }
  return s;
}

}  // namespace

std::string canonical_form(const CellSpec& cell) {
  std::string form = "wl3{";
  for (const auto& [label, count] : wl_features(cell, 3).counts) {
    form += label + "=" + std::to_string(count) + ";";
  }
  form += "}edges{";

  // Minimum edge-list string over addition-node permutations that keep every
  // edge pointing forward.
  std::array<int, kNumAddNodes> perm;
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool have_best = false;
  do {
    auto relabel = [&perm](int node) {
      return node < kNumInputNodes ? node : kNumInputNodes + perm[node - kNumInputNodes];
    };
    bool forward = true;
    std::vector<std::array<int, 3>> edges;
    for (const CellEdge& e : cell.edges) {
      const int s = relabel(e.source);
      const int t = relabel(e.target);
      if (s >= t) forward = false;
      edges.push_back({s, t, static_cast<int>(e.op)});
    }
    if (!forward) continue;
    std::string candidate = edge_list_string(std::move(edges));
    if (!have_best || candidate < best) {
      best = std::move(candidate);
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  form += best + "}";
  return form;
}

std::string canonical_hash(const CellSpec& cell) {
  return hex64(fnv1a64(canonical_form(cell)));
}

}  // namespace nasvad
