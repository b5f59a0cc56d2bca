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

#include "search/search.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <unordered_set>

#include "arch/wl.h"
#include "common/error.h"
#include "common/logging.h"
#include "common/parallel.h"
#include "common/rng.h"
#include "data/dataset.h"
#include "surrogate/gp.h"

namespace nasvad::search {

namespace {

constexpr uint64_t kInitialStream = 0x696e6974;
constexpr uint64_t kBatchStream = 0x62617463;
constexpr uint64_t kEvalStream = 0x6576616c;
constexpr int kInitialAttemptsPerCell = 200;

class Runner {
 public:
  Runner(const SearchConfig& cfg, const Evaluator& evaluate, const RunOptions& options)
      : cfg_(cfg), evaluate_(evaluate), options_(options) {
    if (options_.resume && !options_.archive_path.empty()) {
      stored_ = read_archive(options_.archive_path);
    }
    if (!options_.archive_path.empty()) {
      // Rewrites the kept records, which also drops a torn final line.
      write_archive(stored_, options_.archive_path);
      writer_ = std::make_unique<ArchiveWriter>(options_.archive_path, false);
    }
  }

  SearchResult run() {
    if (!process(initial_cells())) return finish(false);
    for (uint64_t batch = 0; done() < cfg_.total_evaluations; ++batch) {
      std::vector<CellSpec> proposals = propose(batch);
      const size_t room = static_cast<size_t>(cfg_.total_evaluations - done());
      if (proposals.size() > room) proposals.resize(room);
      if (proposals.empty()) {
        NASVAD_LOG(kWarning, "candidate pool exhausted after " << done() << " evaluations");
        break;
      }
      if (!process(proposals)) return finish(false);
    }
    if (stored_.size() > result_.archive.size()) {
      throw SchemaError("archive holds more records than the configured budget");
    }
    return finish(true);
  }

 private:
  int done() const { return static_cast<int>(result_.archive.size()); }

  SearchResult finish(bool complete) {
    result_.complete = complete;
    return std::move(result_);
  }

  ArchSpec arch_for(const CellSpec& cell) const {
    ArchSpec a = cfg_.macro;
    a.cell = cell;
    return a;
  }

  std::vector<CellSpec> initial_cells() const {
    std::vector<OpKind> ops = cfg_.acquisition.allowed_ops;
    if (ops.empty()) ops = all_op_kinds_vector();
    std::vector<CellSpec> cells;
    std::unordered_set<std::string> seen;
    const uint64_t limit = static_cast<uint64_t>(cfg_.initial_random) * kInitialAttemptsPerCell;
    for (uint64_t a = 0; static_cast<int>(cells.size()) < cfg_.initial_random; ++a) {
      if (a >= limit) throw InvalidArgument("cannot draw enough distinct initial cells");
      CellSpec c = random_cell(derive_seed(cfg_.seed, kInitialStream, a), ops);
      if (seen.insert(canonical_hash(c)).second) cells.push_back(std::move(c));
    }
    return cells;
  }

  std::vector<CellSpec> propose(uint64_t batch) const {
    std::vector<EvaluatedCell> archive;
    std::vector<WLFeatureVector> features;
    std::vector<double> scores;
    for (const ArchiveRecord& r : result_.archive) {
      EvaluatedCell e{r.arch.cell, std::nullopt};
      if (r.ok && r.auc) {
        e.score = *r.auc;
        features.push_back(wl_features(r.arch.cell, cfg_.acquisition.wl_depth));
        scores.push_back(*r.auc);
      }
      archive.push_back(std::move(e));
    }
    const uint64_t seed = derive_seed(cfg_.seed, kBatchStream, batch);
    std::vector<CellSpec> out;
    if (scores.empty()) {
      std::vector<CellSpec> pool = build_candidate_pool(archive, cfg_.acquisition, seed);
      const size_t n = std::min(pool.size(), static_cast<size_t>(cfg_.acquisition.batch_size));
      out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
      return out;
    }
    const GPModel model = gp_fit(features, scores);
    for (Candidate& c : select_batch(model, archive, cfg_.acquisition, seed)) {
      out.push_back(std::move(c.cell));
    }
    return out;
  }

  void append(ArchiveRecord r) {
    if (writer_) writer_->append(r);
    if (options_.on_record) options_.on_record(r);
    result_.archive.push_back(std::move(r));
  }

  ArchiveRecord evaluate_at(const CellSpec& cell, int index) const {
    const uint64_t seed = derive_seed(cfg_.seed, kEvalStream, static_cast<uint64_t>(index));
    ArchiveRecord r = evaluate_(arch_for(cell), seed);
    r.index = index;
    return r;
  }

  // Returns false when the new-evaluation limit stopped the run.
  bool process(const std::vector<CellSpec>& proposals) {
    std::vector<std::pair<int, const CellSpec*>> todo;
    for (const CellSpec& cell : proposals) {
      const int index = done() + static_cast<int>(todo.size());
      if (todo.empty() && index < static_cast<int>(stored_.size())) {
        const ArchiveRecord& prev = stored_[static_cast<size_t>(index)];
        if (prev.hash != canonical_hash(cell) || prev.index != index) {
          throw SchemaError("archive record " + std::to_string(index) +
                            " does not match the configured search (hash " + prev.hash + ")");
        }
        result_.archive.push_back(prev);
        continue;
      }
      todo.emplace_back(index, &cell);
    }
    bool limited = false;
    if (options_.max_new_evaluations >= 0) {
      const int left = options_.max_new_evaluations - result_.new_evaluations;
      if (static_cast<int>(todo.size()) > left) {
        todo.resize(static_cast<size_t>(std::max(0, left)));
        limited = true;
      }
    }
    if (options_.jobs <= 1) {
      for (const auto& [index, cell] : todo) {
        append(evaluate_at(*cell, index));
        ++result_.new_evaluations;
      }
    } else {
      std::vector<ArchiveRecord> records(todo.size());
      parallel_for(todo.size(), options_.jobs, [&](size_t i) {
        records[i] = evaluate_at(*todo[i].second, todo[i].first);
      });
      for (ArchiveRecord& r : records) {
        append(std::move(r));
        ++result_.new_evaluations;
      }
    }
    return !limited;
  }

  const SearchConfig& cfg_;
  const Evaluator& evaluate_;
  const RunOptions& options_;
  std::vector<ArchiveRecord> stored_;
  std::unique_ptr<ArchiveWriter> writer_;
  SearchResult result_;
};

}  // namespace

SearchResult run_search(const SearchConfig& cfg, const Evaluator& evaluate,
                        const RunOptions& options) {
  cfg.validate();
  if (options.jobs < 1) throw InvalidArgument("jobs must be >= 1");
  Runner runner(cfg, evaluate, options);
  return runner.run();
}

Evaluator make_evaluator(const SearchConfig& cfg) {
  if (cfg.evaluator == EvaluatorKind::kAttentionCount) return evaluate_attention_count;
  const data::Dataset ds = data::load_dataset(cfg.data_dir);
  if (ds.config.feature.mel_bins != cfg.macro.input_mel_bins) {
    throw SchemaError("dataset has " + std::to_string(ds.config.feature.mel_bins) +
                      " mel bins but macro.input_mel_bins is " +
                      std::to_string(cfg.macro.input_mel_bins));
  }
  auto train_set = std::make_shared<const data::ExampleSet>(data::examples_for_split(
      ds, "train", cfg.macro.window_frames, cfg.macro.target_offsets));
  auto val_set = std::make_shared<const data::ExampleSet>(
      data::examples_for_split(ds, "val", cfg.macro.window_frames, cfg.macro.target_offsets));
  const nn::TrainConfig tc = cfg.train;
  return [train_set, val_set, tc](const ArchSpec& arch, uint64_t seed) {
    return evaluate_arch(arch, *train_set, *val_set, tc, seed);
  };
}

SearchResult run_search_in_dir(const SearchConfig& cfg, const std::string& out_dir, bool resume,
                               int jobs) {
  namespace fs = std::filesystem;
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
  const std::string archive = (fs::path(out_dir) / "archive.jsonl").string();
  if (!resume && fs::exists(archive) && fs::file_size(archive) > 0) {
    throw InvalidArgument("archive " + archive + " already exists; pass --resume to continue it");
  }
  {
    const std::string path = (fs::path(out_dir) / "config.json").string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << search_config_to_json(cfg).dump(2) << '\n';
  }
  RunOptions options;
  options.archive_path = archive;
  options.resume = resume;
  options.jobs = jobs;
  SearchResult result = run_search(cfg, make_evaluator(cfg), options);
  const std::vector<ArchiveRecord> ranked = result.ranked();
  if (!ranked.empty() && ranked.front().ok) {
    save_arch(ranked.front().arch, (fs::path(out_dir) / "best_arch.json").string());
  }
  return result;
}

int evaluations_to_optimum(const std::vector<ArchiveRecord>& archive, double optimum) {
  for (size_t i = 0; i < archive.size(); ++i) {
    const ArchiveRecord& r = archive[i];
    if (r.ok && r.auc && std::abs(*r.auc - optimum) <= 1e-12) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(archive.size()) + 1;
}

double best_score(const std::vector<ArchiveRecord>& archive, int n) {
  double best = 0.0;
  const size_t end = n < 0 ? archive.size() : std::min(archive.size(), static_cast<size_t>(n));
  for (size_t i = 0; i < end; ++i) {
    if (archive[i].ok && archive[i].auc) best = std::max(best, *archive[i].auc);
  }
  return best;
}

}  // namespace nasvad::search
