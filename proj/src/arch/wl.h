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

#ifndef NASVAD_ARCH_WL_H_
#define NASVAD_ARCH_WL_H_

#include <cstdint>
#include <map>
#include <string>

#include "arch/cell.h"

namespace nasvad {

inline constexpr int kDefaultWlDepth = 2;

// Weisfeiler-Lehman subtree features: counts of every node label produced at
// refinement iterations 0..depth. Ordered map so that iteration, printing and
// sparse dot products are deterministic.
struct WLFeatureVector {
  std::map<std::string, int64_t> counts;
  int depth = 0;

  int64_t total() const;
  bool operator==(const WLFeatureVector&) const = default;
};

// Iteration-0 labels: IN1, IN2, ADD for cell nodes, and one extra node per
// edge labelled with its op name, so the op is a first-class node. A node's
// label at iteration i is "(" + its label at i-1 + "|" + the sorted labels of
// its in-neighbours at i-1 + ")".
WLFeatureVector wl_features(const CellSpec& cell, int depth = kDefaultWlDepth);

// Stable 16-hex-digit digest of a cell, invariant to edge order and to
// relabelings of addition nodes that preserve wiring.
std::string canonical_hash(const CellSpec& cell);

// The string the hash is computed from; exposed for tests.
std::string canonical_form(const CellSpec& cell);

}  // namespace nasvad

#endif  // NASVAD_ARCH_WL_H_
