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

#include "search/evaluate.h"

#include <chrono>

#include "arch/wl.h"
#include "common/error.h"
#include "common/logging.h"
#include "nn/inference.h"
#include "nn/model.h"

namespace nasvad::search {

namespace {

ArchiveRecord base_record(const ArchSpec& arch, uint64_t seed) {
  ArchiveRecord r;
  r.arch = arch;
  r.hash = canonical_hash(arch.cell);
  r.seed = seed;
  return r;
}

}  // namespace

ArchiveRecord evaluate_arch(const ArchSpec& arch, const data::ExampleSet& train_set,
                            const data::ExampleSet& val_set, const nn::TrainConfig& cfg,
                            uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ArchiveRecord r = base_record(arch, seed);
  auto finish = [&]() -> ArchiveRecord& {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
  const ValidationReport report = validate_arch(arch);
  if (!report.ok) {
    r.reason = "invalid cell: " + report.to_string();
    return finish();
  }
  try {
    std::unique_ptr<nn::VadModel> model = nn::build_model(arch, seed);
    r.param_count = nn::count_params(*model);
    nn::TrainConfig tc = cfg;
    tc.seed = seed;
    const nn::TrainReport tr = nn::train(*model, train_set, val_set, tc);
    r.epochs_run = tr.epochs_run;
    const nn::SetScore score = nn::score_set(*model, val_set, tc.batch_size);
    if (!score.auc) {
      r.reason = "single-class validation set";
      return finish();
    }
    r.auc = *score.auc;
    r.ok = true;
  } catch (const Error& e) {
    r.reason = e.what();
    NASVAD_LOG(kWarning, "evaluation of " << r.hash << " failed: " << e.what());
  }
  return finish();
}

ArchiveRecord evaluate_attention_count(const ArchSpec& arch, uint64_t seed) {
  ArchiveRecord r = base_record(arch, seed);
  const ValidationReport report = validate_arch(arch);
  if (!report.ok) {
    r.reason = "invalid cell: " + report.to_string();
    return r;
  }
  r.auc = count_attention_edges(arch.cell) / static_cast<double>(kNumCellEdges);
  r.ok = true;
  return r;
}

}  // namespace nasvad::search
