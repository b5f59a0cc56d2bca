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

#ifndef NASVAD_SEARCH_SEARCH_H_
#define NASVAD_SEARCH_SEARCH_H_

#include <functional>
#include <string>
#include <vector>

#include "search/archive.h"
#include "search/config.h"
#include "search/evaluate.h"

namespace nasvad::search {

struct RunOptions {
  // Archive file; empty keeps the archive in memory only.
  std::string archive_path;
  // Continue from the records already in archive_path.
  bool resume = false;
  // Parallel evaluations within a batch; 1 is the deterministic mode.
  int jobs = 1;
  // Stop after this many new evaluations in this call (for interruption
  // tests); < 0 means no limit.
  int max_new_evaluations = -1;
  // Called after every appended record.
  std::function<void(const ArchiveRecord&)> on_record;
};

struct SearchResult {
  std::vector<ArchiveRecord> archive;  // evaluation order
  int new_evaluations = 0;
  bool complete = false;
  std::vector<ArchiveRecord> ranked() const { return sorted_by_auc(archive); }
};

// Phase 1 evaluates initial_random distinct random cells; phase 2 repeatedly
// fits the GP on all ok records and evaluates an EI-selected batch until the
// budget is spent. Proposals are a pure function of the config and the
// archive prefix, so a resumed run re-derives each proposal, checks it
// against the stored record and evaluates only what is missing.
SearchResult run_search(const SearchConfig& cfg, const Evaluator& evaluate,
                        const RunOptions& options = {});

// Evaluator for cfg.evaluator; loads the dataset for the train evaluator.
Evaluator make_evaluator(const SearchConfig& cfg);

// Runs the search with its archive at out_dir/archive.jsonl, then writes
// out_dir/best_arch.json (when any record is ok) and out_dir/config.json.
// Without `resume` an existing non-empty archive is refused.
SearchResult run_search_in_dir(const SearchConfig& cfg, const std::string& out_dir, bool resume,
                               int jobs);

// 1-based index of the first record reaching `optimum` (within 1e-12);
// archive size + 1 when never reached.
int evaluations_to_optimum(const std::vector<ArchiveRecord>& archive, double optimum);

// Best ok score among the first `n` records (all when n < 0); 0 if none.
double best_score(const std::vector<ArchiveRecord>& archive, int n = -1);

}  // namespace nasvad::search

#endif  // NASVAD_SEARCH_SEARCH_H_
