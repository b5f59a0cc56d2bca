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

#ifndef NASVAD_ARCH_CELL_H_
#define NASVAD_ARCH_CELL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arch/op_kind.h"

namespace nasvad {

// Node numbering inside a cell: 0 = IN1 (previous cell output), 1 = IN2
// (output of the cell before that), 2..4 = the three addition nodes in
// topological order. The cell output concatenates nodes 2..4 on channels.
inline constexpr int kNumInputNodes = 2;
inline constexpr int kNumAddNodes = 3;
inline constexpr int kNumCellNodes = kNumInputNodes + kNumAddNodes;
inline constexpr int kEdgesPerAddNode = 2;
inline constexpr int kNumCellEdges = kNumAddNodes * kEdgesPerAddNode;

struct CellEdge {
  int source = 0;
  int target = kNumInputNodes;
  OpKind op = OpKind::SKIP;

  bool operator==(const CellEdge&) const = default;
};

struct CellSpec {
  std::vector<CellEdge> edges;

  bool operator==(const CellSpec&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;

  // One violation per line.
  std::string to_string() const;
};

std::string node_name(int node);

ValidationReport validate_cell(const CellSpec& cell);

// Draws edge ops uniformly from `allowed_ops` and edge sources uniformly from
// the legal predecessors of each addition node, resampling the whole cell
// until it validates. Throws if no valid cell can be built from the ops.
CellSpec random_cell(uint64_t seed, std::span<const OpKind> allowed_ops);
CellSpec random_cell(uint64_t seed);

struct MutationOptions {
  bool allow_op_change = true;
  bool allow_rewire = true;
  std::vector<OpKind> allowed_ops;  // empty means all 18
};

// One primitive edit: replace one edge's op, or rewire one edge's source.
// The result is valid and differs from `cell`.
CellSpec mutate_cell(const CellSpec& cell, uint64_t seed,
                     const MutationOptions& options = {});

// Published cell found on TIMIT + SoundIdeas; wiring in docs/reference_cell.md.
CellSpec reference_cell();

// Number of edges whose op is an attention kind.
int count_attention_edges(const CellSpec& cell);

}  // namespace nasvad

#endif  // NASVAD_ARCH_CELL_H_
