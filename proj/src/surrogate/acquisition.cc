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

#include "surrogate/acquisition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "arch/wl.h"
#include "common/error.h"
#include "common/rng.h"

namespace nasvad {

void AcquisitionConfig::validate() const {
  if (!(exploration_margin >= 0.0)) throw InvalidArgument("acquisition.xi must be >= 0");
  if (pool_size <= 0) throw InvalidArgument("acquisition.pool_size must be positive");
  if (batch_size <= 0) throw InvalidArgument("acquisition.batch_size must be positive");
  if (pool_size < batch_size) {
    throw InvalidArgument("acquisition.pool_size must be >= acquisition.batch_size");
  }
  if (!(mutation_fraction >= 0.0 && mutation_fraction <= 1.0)) {
    throw InvalidArgument("acquisition.mutation_fraction must lie in [0, 1]");
  }
  if (wl_depth < 0) throw InvalidArgument("acquisition.wl_depth must be >= 0");
}

namespace {
constexpr uint64_t kMutationStream = 0x6d757461;
constexpr uint64_t kRandomStream = 0x72616e64;
constexpr int kAttemptsPerSlot = 20;
}  // namespace

std::vector<CellSpec> build_candidate_pool(std::span<const EvaluatedCell> archive,
                                           const AcquisitionConfig& cfg, uint64_t seed) {
  cfg.validate();
  std::unordered_set<std::string> seen;
  for (const auto& e : archive) seen.insert(canonical_hash(e.cell));

  std::vector<const EvaluatedCell*> scored;
  for (const auto& e : archive) {
    if (e.score) scored.push_back(&e);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const EvaluatedCell* a, const EvaluatedCell* b) { return *a->score > *b->score; });
  if (scored.size() > 5) scored.resize(5);

  std::vector<OpKind> ops = cfg.allowed_ops;
  if (ops.empty()) ops = all_op_kinds_vector();
  MutationOptions mut;
  mut.allowed_ops = ops;

  const int n_mut = scored.empty()
                        ? 0
                        : static_cast<int>(std::lround(cfg.mutation_fraction * cfg.pool_size));
  const int n_rand = cfg.pool_size - n_mut;

  std::vector<CellSpec> pool;
  auto try_add = [&](CellSpec c) {
    std::string h = canonical_hash(c);
    if (seen.insert(std::move(h)).second) {
      pool.push_back(std::move(c));
      return true;
    }
    return false;
  };

  int added = 0;
  for (uint64_t attempt = 0;
       added < n_mut && attempt < static_cast<uint64_t>(n_mut) * kAttemptsPerSlot; ++attempt) {
    const EvaluatedCell* parent = scored[attempt % scored.size()];
    if (try_add(mutate_cell(parent->cell, derive_seed(seed, kMutationStream, attempt), mut))) {
      ++added;
    }
  }
  added = 0;
  for (uint64_t attempt = 0;
       added < n_rand && attempt < static_cast<uint64_t>(n_rand) * kAttemptsPerSlot; ++attempt) {
    if (try_add(random_cell(derive_seed(seed, kRandomStream, attempt), ops))) ++added;
  }
  return pool;
}

std::vector<Candidate> rank_candidates(const GPModel& model, std::span<const CellSpec> pool,
                                       double incumbent_best, const AcquisitionConfig& cfg) {
  std::vector<Candidate> out;
  out.reserve(pool.size());
  for (const CellSpec& c : pool) {
    Candidate cand;
    cand.cell = c;
    cand.hash = canonical_hash(c);
    GPPrediction p = model.predict(wl_features(c, cfg.wl_depth));
    cand.mean = p.mean;
    cand.variance = p.variance;
    cand.ei = expected_improvement(p.mean, p.variance, incumbent_best, cfg.exploration_margin);
    out.push_back(std::move(cand));
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ei != b.ei) return a.ei > b.ei;
    return a.variance > b.variance;
  });
  return out;
}

std::vector<Candidate> select_batch(const GPModel& model, std::span<const EvaluatedCell> archive,
                                    const AcquisitionConfig& cfg, uint64_t seed) {
  if (archive.empty()) throw InvalidArgument("select_batch: archive is empty");
  double incumbent = -std::numeric_limits<double>::infinity();
  for (const auto& e : archive) {
    if (e.score) incumbent = std::max(incumbent, *e.score);
  }
  if (!std::isfinite(incumbent)) {
    throw InvalidArgument("select_batch: archive holds no successful evaluation");
  }
  std::vector<CellSpec> pool = build_candidate_pool(archive, cfg, seed);
  if (pool.empty()) {
    throw RuntimeError("select_batch: candidate pool is empty after deduplication; retry with a new seed");
  }
  std::vector<Candidate> ranked = rank_candidates(model, pool, incumbent, cfg);
  if (ranked.size() > static_cast<size_t>(cfg.batch_size)) ranked.resize(cfg.batch_size);
  return ranked;
}

}  // namespace nasvad
