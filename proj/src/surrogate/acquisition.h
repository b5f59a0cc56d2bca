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

#ifndef NASVAD_SURROGATE_ACQUISITION_H_
#define NASVAD_SURROGATE_ACQUISITION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arch/cell.h"
#include "surrogate/gp.h"

namespace nasvad {

struct AcquisitionConfig {
  double exploration_margin = 0.01;
  int pool_size = 100;
  double mutation_fraction = 0.5;
  int batch_size = 4;
  int wl_depth = kDefaultWlDepth;
  std::vector<OpKind> allowed_ops;  // empty means all 18

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// One archive entry as seen by the acquisition step; failed evaluations have
// no score but still block their hash from being proposed again.
struct EvaluatedCell {
  CellSpec cell;
  std::optional<double> score;
};

struct Candidate {
  CellSpec cell;
  std::string hash;
  double mean = 0.0;
  double variance = 0.0;
  double ei = 0.0;
};

// round(mutation_fraction * pool_size) mutants of the top-5 scored cells
// followed by random cells, unique by canonical hash and absent from the
// archive. May come back short when the space near the archive is exhausted.
std::vector<CellSpec> build_candidate_pool(std::span<const EvaluatedCell> archive,
                                           const AcquisitionConfig& cfg, uint64_t seed);

// Scores the pool and orders it by EI, then predictive variance, then pool
// order. Returns every candidate.
std::vector<Candidate> rank_candidates(const GPModel& model, std::span<const CellSpec> pool,
                                       double incumbent_best, const AcquisitionConfig& cfg);

// The top batch_size candidates of the ranked pool.
std::vector<Candidate> select_batch(const GPModel& model, std::span<const EvaluatedCell> archive,
                                    const AcquisitionConfig& cfg, uint64_t seed);

}  // namespace nasvad

#endif  // NASVAD_SURROGATE_ACQUISITION_H_
