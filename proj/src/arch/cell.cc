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

#include "arch/cell.h"

#include <algorithm>
#include <sstream>

#include "common/error.h"
#include "common/rng.h"

namespace nasvad {

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += '\n';
    out += v;
  }
  return out;
}

std::string node_name(int node) {
  if (node == 0) return "IN1";
  if (node == 1) return "IN2";
  if (node >= kNumInputNodes && node < kNumCellNodes) {
    return "ADD" + std::to_string(node - kNumInputNodes);
  }
  return "node" + std::to_string(node);
}

ValidationReport validate_cell(const CellSpec& cell) {
  ValidationReport report;
  auto fail = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (cell.edges.size() != static_cast<size_t>(kNumCellEdges)) {
    fail("edge count " + std::to_string(cell.edges.size()) + " != " +
         std::to_string(kNumCellEdges));
  }

  int in_degree[kNumCellNodes] = {};
  bool wiring_ok = true;
  for (size_t i = 0; i < cell.edges.size(); ++i) {
    const CellEdge& e = cell.edges[i];
    std::ostringstream where;
    where << "edge " << i << " (" << node_name(e.source) << " -> "
          << node_name(e.target) << ", " << op_name(e.op) << ")";
    if (e.target < kNumInputNodes || e.target >= kNumCellNodes) {
      fail(where.str() + ": target is not an addition node");
      wiring_ok = false;
      continue;
    }
    if (e.source < 0 || e.source >= e.target) {
      fail(where.str() + ": source does not precede target in topological order");
      wiring_ok = false;
      continue;
    }
    ++in_degree[e.target];
  }
  for (int n = kNumInputNodes; n < kNumCellNodes; ++n) {
    if (in_degree[n] != kEdgesPerAddNode) {
      fail(node_name(n) + ": in-degree " + std::to_string(in_degree[n]) +
           " != " + std::to_string(kEdgesPerAddNode));
    }
  }

  if (wiring_ok) {
    // A node is live if a chain of non-ZERO edges reaches it from an input.
    bool live[kNumCellNodes] = {true, true, false, false, false};
    for (int n = kNumInputNodes; n < kNumCellNodes; ++n) {
      for (const CellEdge& e : cell.edges) {
        if (e.target == n && e.op != OpKind::ZERO && live[e.source]) live[n] = true;
      }
    }
    if (!std::any_of(live + kNumInputNodes, live + kNumCellNodes,
                     [](bool b) { return b; })) {
      fail("output disconnected: no non-ZERO path from an input reaches the output");
    }
  }
  return report;
}

namespace {

constexpr int kMaxAttempts = 100000;

CellSpec draw_cell(Rng& rng, std::span<const OpKind> ops) {
  CellSpec cell;
  cell.edges.reserve(kNumCellEdges);
  for (int target = kNumInputNodes; target < kNumCellNodes; ++target) {
    for (int k = 0; k < kEdgesPerAddNode; ++k) {
      CellEdge e;
      e.target = target;
      e.source = static_cast<int>(rng.uniform_index(static_cast<size_t>(target)));
      e.op = ops[rng.uniform_index(ops.size())];
      cell.edges.push_back(e);
    }
  }
  return cell;
}

}  // namespace

CellSpec random_cell(uint64_t seed, std::span<const OpKind> allowed_ops) {
  if (allowed_ops.empty()) throw InvalidArgument("random_cell: allowed_ops is empty");
  if (std::all_of(allowed_ops.begin(), allowed_ops.end(),
                  [](OpKind k) { return k == OpKind::ZERO; })) {
    throw InvalidArgument("random_cell: no valid cell exists when only ZERO is allowed");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CellSpec cell = draw_cell(rng, allowed_ops);
    if (validate_cell(cell).ok) return cell;
  }
  throw RuntimeError("random_cell: no valid cell after repeated sampling");
}

CellSpec random_cell(uint64_t seed) {
  const auto& all = all_op_kinds();
  return random_cell(seed, std::span<const OpKind>(all.data(), all.size()));
}

CellSpec mutate_cell(const CellSpec& cell, uint64_t seed, const MutationOptions& options) {
  if (!options.allow_op_change && !options.allow_rewire) {
    throw InvalidArgument("mutate_cell: every mutation kind is disabled");
  }
  std::vector<OpKind> ops = options.allowed_ops;
  if (ops.empty()) ops = all_op_kinds_vector();

  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CellSpec out = cell;
    CellEdge& e = out.edges[rng.uniform_index(out.edges.size())];
    bool op_change = options.allow_op_change;
    if (options.allow_op_change && options.allow_rewire) op_change = rng.uniform_index(2) == 0;

    if (op_change) {
      std::vector<OpKind> choices;
      for (OpKind k : ops) {
        if (k != e.op) choices.push_back(k);
      }
      if (choices.empty()) continue;
      e.op = choices[rng.uniform_index(choices.size())];
    } else {
      std::vector<int> choices;
      for (int s = 0; s < e.target; ++s) {
        if (s != e.source) choices.push_back(s);
      }
      if (choices.empty()) continue;
      e.source = choices[rng.uniform_index(choices.size())];
    }
    if (out != cell && validate_cell(out).ok) return out;
  }
  throw RuntimeError("mutate_cell: no distinct valid neighbour found");
}

CellSpec reference_cell() {
  CellSpec cell;
  cell.edges = {
      {0, 2, OpKind::MBConv3x4},
      {1, 2, OpKind::MHA_F_2},
      {0, 3, OpKind::MBConv5x4},
      {2, 3, OpKind::SE_025},
      {3, 4, OpKind::MHA_F_4},
      {2, 4, OpKind::SKIP},
  };
  return cell;
}

int count_attention_edges(const CellSpec& cell) {
  return static_cast<int>(std::count_if(cell.edges.begin(), cell.edges.end(),
                                        [](const CellEdge& e) { return is_attention(e.op); }));
}

}  // namespace nasvad
