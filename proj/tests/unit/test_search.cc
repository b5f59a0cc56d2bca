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

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "arch/cell.h"
#include "arch/wl.h"
#include "common/error.h"
#include "data/dataset.h"
#include "search/archive.h"
#include "search/config.h"
#include "search/evaluate.h"
#include "search/search.h"
#include "test_support.h"

namespace nasvad::search {
namespace {

SearchConfig cheap_config(uint64_t seed, int total = 30, int initial = 10) {
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.total_evaluations = total;
  cfg.initial_random = initial;
  cfg.evaluator = EvaluatorKind::kAttentionCount;
  return cfg;
}

std::vector<std::string> fingerprints(const std::vector<ArchiveRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(record_fingerprint(r));
  return out;
}

TEST_CASE("cheap benchmark evaluator") {
  ArchSpec a = reference_arch();
  ArchiveRecord r = evaluate_attention_count(a, 3);
  CHECK(r.ok);
  CHECK(*r.auc == doctest::Approx(2.0 / 6.0));
  CHECK(r.hash == canonical_hash(a.cell));
  CHECK(r.seed == 3);
}

TEST_CASE("search runs the budget with distinct cells") {
  SearchConfig cfg = cheap_config(1);
  SearchResult res = run_search(cfg, evaluate_attention_count);
  CHECK(res.complete);
  REQUIRE(res.archive.size() == 30);
  std::set<std::string> hashes;
  for (size_t i = 0; i < res.archive.size(); ++i) {
    CHECK(res.archive[i].index == static_cast<int>(i));
    CHECK(validate_cell(res.archive[i].arch.cell).ok);
    CHECK(hashes.insert(res.archive[i].hash).second);
  }
  auto ranked = res.ranked();
  for (size_t i = 1; i < ranked.size(); ++i) CHECK(*ranked[i - 1].auc >= *ranked[i].auc);
}

TEST_CASE("a budget equal to the initial design is pure random search") {
  SearchResult random_only = run_search(cheap_config(4, 10, 10), evaluate_attention_count);
  SearchResult full = run_search(cheap_config(4, 30, 10), evaluate_attention_count);
  REQUIRE(random_only.archive.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(random_only.archive[i].hash == full.archive[i].hash);
}

TEST_CASE("single-threaded search is bit reproducible") {
  SearchResult a = run_search(cheap_config(7), evaluate_attention_count);
  SearchResult b = run_search(cheap_config(7), evaluate_attention_count);
  CHECK(fingerprints(a.archive) == fingerprints(b.archive));
  SearchResult c = run_search(cheap_config(8), evaluate_attention_count);
  CHECK(fingerprints(a.archive) != fingerprints(c.archive));
  RunOptions par;
  par.jobs = 3;
  SearchResult d = run_search(cheap_config(7), evaluate_attention_count, par);
  CHECK(fingerprints(a.archive) == fingerprints(d.archive));
}

TEST_CASE("interrupt and resume reproduce the uninterrupted archive") {
  const std::string dir = testing::make_temp_dir("resume");
  SearchConfig cfg = cheap_config(5);
  SearchResult whole = run_search(cfg, evaluate_attention_count);
  for (int stop : {3, 10, 13, 22}) {
    RunOptions o;
    o.archive_path = dir + "/archive_" + std::to_string(stop) + ".jsonl";
    o.max_new_evaluations = stop;
    SearchResult part = run_search(cfg, evaluate_attention_count, o);
    CHECK_FALSE(part.complete);
    CHECK(read_archive(o.archive_path).size() == static_cast<size_t>(stop));
    o.resume = true;
    o.max_new_evaluations = -1;
    SearchResult resumed = run_search(cfg, evaluate_attention_count, o);
    CHECK(resumed.complete);
    CHECK(resumed.new_evaluations == 30 - stop);
    CHECK(fingerprints(resumed.archive) == fingerprints(whole.archive));
    CHECK(fingerprints(read_archive(o.archive_path)) == fingerprints(whole.archive));
  }

  SUBCASE("torn final line is dropped and re-evaluated") {
    RunOptions o;
    o.archive_path = dir + "/torn.jsonl";
    o.max_new_evaluations = 12;
    run_search(cfg, evaluate_attention_count, o);
    {
      std::ofstream(o.archive_path, std::ios::app) << "{\"index\": 12, \"ar";
    }
    CHECK(read_archive(o.archive_path).size() == 12);
    o.resume = true;
    o.max_new_evaluations = -1;
    CHECK(fingerprints(run_search(cfg, evaluate_attention_count, o).archive) ==
          fingerprints(whole.archive));
  }
  SUBCASE("an archive from another config is refused") {
    RunOptions o;
    o.archive_path = dir + "/other.jsonl";
    o.max_new_evaluations = 5;
    run_search(cheap_config(6), evaluate_attention_count, o);
    o.resume = true;
    try {
      run_search(cfg, evaluate_attention_count, o);
      FAIL("mismatched archive accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSchema);
      CHECK(std::string(e.what()).find("does not match") != std::string::npos);
    }
  }
}

TEST_CASE("archive records") {
  ArchiveRecord r;
  r.index = 3;
  r.arch = reference_arch();
  r.hash = canonical_hash(r.arch.cell);
  r.ok = true;
  r.auc = 0.8125;
  r.param_count = 144899;
  r.epochs_run = 4;
  r.seconds = 1.5;
  r.seed = 99;
  ArchiveRecord back = record_from_json(record_to_json(r));
  CHECK(record_fingerprint(back) == record_fingerprint(r));
  CHECK(back.seconds == 1.5);
  ArchiveRecord slower = r;
  slower.seconds = 9.0;
  CHECK(record_fingerprint(slower) == record_fingerprint(r));
  ArchiveRecord failed = r;
  failed.ok = false;
  failed.auc.reset();
  failed.reason = "invalid cell: x";
  CHECK(record_to_json(failed).at("status") == "failed");
  CHECK(record_from_json(record_to_json(failed)).reason == "invalid cell: x");

  const std::string dir = testing::make_temp_dir("archive");
  write_archive({r, failed}, dir + "/a.jsonl");
  CHECK(read_archive(dir + "/a.jsonl").size() == 2);
  CHECK(read_archive(dir + "/none.jsonl").empty());
  {
    std::ofstream(dir + "/bad.jsonl") << "{broken\n" << record_to_json(r).dump() << "\n";
  }
  CHECK_THROWS_AS(read_archive(dir + "/bad.jsonl"), Error);

  auto sorted = sorted_by_auc({failed, r});
  CHECK(sorted[0].ok);
  CHECK(evaluations_to_optimum({failed, r}, 0.8125) == 2);
  CHECK(evaluations_to_optimum({failed, r}, 0.9) == 3);
  CHECK(best_score({failed, r}) == 0.8125);
  CHECK(best_score({failed, r}, 1) == 0.0);
}

TEST_CASE("search config") {
  SearchConfig cfg = cheap_config(3);
  cfg.acquisition.allowed_ops = {OpKind::SKIP, OpKind::MHA_T_2};
  SearchConfig back = search_config_from_json(search_config_to_json(cfg));
  CHECK(search_config_to_json(back) == search_config_to_json(cfg));

  nlohmann::json doc = search_config_to_json(cfg);
  doc["budget"] = 5;
  CHECK_THROWS_WITH(search_config_from_json(doc), doctest::Contains("unknown config field 'budget'"));
  doc = search_config_to_json(cfg);
  doc["initial_random"] = 40;
  CHECK_THROWS_WITH(search_config_from_json(doc),
                    doctest::Contains("initial_random (40) must not exceed total_evaluations (30)"));
  doc = search_config_to_json(cfg);
  doc["acquisition"]["allowed_ops"] = {"SKIP", "CONV9"};
  CHECK_THROWS_WITH(search_config_from_json(doc), doctest::Contains("CONV9"));
  doc = search_config_to_json(cfg);
  doc["evaluator"] = "train";
  doc["data_dir"] = "";
  CHECK_THROWS_WITH(search_config_from_json(doc), doctest::Contains("data_dir"));
  doc["data_dir"] = "data";
  CHECK(search_config_from_json(doc, "/base").data_dir == "/base/data");
  doc["macro"]["base_channels"] = 6;
  CHECK_THROWS_AS(search_config_from_json(doc, "/base"), Error);

  const std::string dir = testing::make_temp_dir("cfg");
  CHECK_THROWS_AS(load_search_config(dir + "/missing.json"), Error);
}

TEST_CASE("search in a directory") {
  const std::string dir = testing::make_temp_dir("outdir");
  SearchConfig cfg = cheap_config(2, 12, 4);
  SearchResult r = run_search_in_dir(cfg, dir, false, 1);
  CHECK(r.archive.size() == 12);
  CHECK(std::filesystem::exists(dir + "/best_arch.json"));
  CHECK(std::filesystem::exists(dir + "/config.json"));
  CHECK(load_arch(dir + "/best_arch.json").cell == r.ranked().front().arch.cell);
  CHECK_THROWS_WITH(run_search_in_dir(cfg, dir, false, 1), doctest::Contains("--resume"));
  SearchResult again = run_search_in_dir(cfg, dir, true, 1);
  CHECK(again.new_evaluations == 0);
  CHECK(fingerprints(again.archive) == fingerprints(r.archive));
}

TEST_CASE("training evaluator") {
  data::SynthDataConfig dcfg;
  dcfg.clips = 5;
  dcfg.duration_s = 1.2;
  dcfg.feature.mel_bins = 10;
  data::Dataset ds = data::synth_dataset(dcfg);
  ArchSpec a = testing::tiny_arch(reference_cell(), 8, 10, 32);
  a.num_cells = 2;
  auto tr = data::examples_for_all(ds, a.window_frames, a.target_offsets);
  nn::TrainConfig tc;
  tc.max_epochs = 1;
  tc.early_stop_patience = 1;
  tc.augment = false;
  ArchiveRecord r = evaluate_arch(a, tr, tr, tc, 4);
  CHECK(r.ok);
  REQUIRE(r.auc.has_value());
  CHECK(*r.auc >= 0.0);
  CHECK(*r.auc <= 1.0);
  CHECK(r.epochs_run == 1);
  CHECK(r.param_count > 0);
  ArchiveRecord r2 = evaluate_arch(a, tr, tr, tc, 4);
  CHECK(record_fingerprint(r2) == record_fingerprint(r));

  ArchSpec bad = a;
  for (auto& e : bad.cell.edges) e.op = OpKind::ZERO;
  ArchiveRecord f = evaluate_arch(bad, tr, tr, tc, 4);
  CHECK_FALSE(f.ok);
  CHECK(f.reason.rfind("invalid cell", 0) == 0);

  auto single = tr;
  for (auto& ex : single.examples) std::fill(ex.labels.begin(), ex.labels.end(), 0);
  for (auto& c : single.clips) std::fill(c.labels.begin(), c.labels.end(), 0);
  ArchiveRecord s = evaluate_arch(a, tr, single, tc, 4);
  CHECK_FALSE(s.ok);
}

}  // namespace
}  // namespace nasvad::search
