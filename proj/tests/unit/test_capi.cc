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

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "nasvad/nasvad.h"

namespace {

std::string temp_dir(const char* tag) {
  auto p = std::filesystem::temp_directory_path() /
           (std::string("nasvad_capi_") + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const size_t pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

TEST_CASE("version and errors") {
  nasvad_set_log_level(NASVAD_LOG_SILENT);
  CHECK(std::string(nasvad_version()) == "0.1.0");
  nasvad_arch* a = nullptr;
  CHECK(nasvad_arch_preset("no-such-cell", &a) == NASVAD_ERR_INVALID_ARGUMENT);
  CHECK(a == nullptr);
  CHECK(std::string(nasvad_last_error()).size() > 0);
  CHECK(nasvad_arch_load("/nonexistent/arch.json", &a) == NASVAD_ERR_IO);
  CHECK(std::string(nasvad_last_error()).find("/nonexistent/arch.json") != std::string::npos);
  CHECK(nasvad_arch_from_json("{\"format_version\": 1}", &a) == NASVAD_ERR_SCHEMA);
  CHECK(nasvad_arch_preset("reference-cell", nullptr) == NASVAD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("architecture handles") {
  nasvad_arch* a = nullptr;
  REQUIRE(nasvad_arch_preset("reference-cell", &a) == NASVAD_OK);
  int64_t params = 0;
  CHECK(nasvad_arch_param_count(a, &params) == NASVAD_OK);
  CHECK(params == 144899);
  char hash[17];
  CHECK(nasvad_arch_hash(a, hash, sizeof hash) == NASVAD_OK);
  CHECK(std::strlen(hash) == 16);
  char small[8];
  CHECK(nasvad_arch_hash(a, small, sizeof small) == NASVAD_ERR_INVALID_ARGUMENT);

  char* text = nullptr;
  REQUIRE(nasvad_arch_to_json(a, &text) == NASVAD_OK);
  nasvad_arch* b = nullptr;
  REQUIRE(nasvad_arch_from_json(text, &b) == NASVAD_OK);
  char hash_b[17];
  nasvad_arch_hash(b, hash_b, sizeof hash_b);
  CHECK(std::string(hash) == hash_b);

  const std::string dir = temp_dir("arch");
  CHECK(nasvad_arch_save(a, (dir + "/a.json").c_str()) == NASVAD_OK);
  nasvad_arch* c = nullptr;
  CHECK(nasvad_arch_load((dir + "/a.json").c_str(), &c) == NASVAD_OK);

  std::string broken = replace(text, "\"SKIP\"", "\"ZERO\"");
  nasvad_arch* d = nullptr;
  CHECK(nasvad_arch_from_json(broken.c_str(), &d) == NASVAD_OK);
  char* report = nullptr;
  CHECK(nasvad_arch_validate(a, &report) == NASVAD_OK);
  nasvad_string_free(report);
  std::string all_zero = text;
  for (const char* op : {"\"MBConv3x4\"", "\"MHA_F_2\"", "\"MBConv5x4\"", "\"SE_025\"",
                         "\"MHA_F_4\"", "\"SKIP\""}) {
    all_zero = replace(all_zero, op, "\"ZERO\"");
  }
  nasvad_arch* z = nullptr;
  CHECK(nasvad_arch_from_json(all_zero.c_str(), &z) == NASVAD_ERR_SCHEMA);
  CHECK(std::string(nasvad_last_error()).find("output disconnected") != std::string::npos);

  nasvad_string_free(text);
  nasvad_arch_free(a);
  nasvad_arch_free(b);
  nasvad_arch_free(c);
  nasvad_arch_free(d);
  nasvad_arch_free(nullptr);
}

TEST_CASE("data, training, evaluation") {
  const std::string dir = temp_dir("train");
  nasvad_synth_options so;
  nasvad_synth_options_default(&so);
  CHECK(so.clips > 0);
  so.clips = 4;
  so.duration_s = 1.0;
  so.seed = 3;
  REQUIRE(nasvad_dataset_synth(&so, (dir + "/data").c_str()) == NASVAD_OK);
  so.clips = 1;
  CHECK(nasvad_dataset_synth(&so, (dir + "/bad").c_str()) == NASVAD_ERR_SCHEMA);

  nasvad_dataset* ds = nullptr;
  REQUIRE(nasvad_dataset_load((dir + "/data").c_str(), &ds) == NASVAD_OK);
  int n = 0;
  CHECK(nasvad_dataset_clip_count(ds, "all", &n) == NASVAD_OK);
  CHECK(n == 4);
  int tr = 0, va = 0, te = 0;
  nasvad_dataset_clip_count(ds, "train", &tr);
  nasvad_dataset_clip_count(ds, "val", &va);
  nasvad_dataset_clip_count(ds, "test", &te);
  CHECK(tr + va + te == 4);
  CHECK(nasvad_dataset_clip_count(ds, "dev", &n) == NASVAD_ERR_INVALID_ARGUMENT);

  nasvad_arch* preset = nullptr;
  nasvad_arch_preset("reference-cell", &preset);
  char* text = nullptr;
  nasvad_arch_to_json(preset, &text);
  std::string small = replace(text, "\"base_channels\": 16", "\"base_channels\": 8");
  small = replace(small, "\"num_cells\": 4", "\"num_cells\": 2");
  nasvad_string_free(text);
  nasvad_arch* a = nullptr;
  REQUIRE(nasvad_arch_from_json(small.c_str(), &a) == NASVAD_OK);

  nasvad_train_options to;
  nasvad_train_options_default(&to);
  CHECK(to.max_epochs == 20);
  to.max_epochs = 1;
  to.early_stop_patience = 1;
  to.batch_size = 8;
  nasvad_model* m = nullptr;
  nasvad_train_summary summary;
  REQUIRE(nasvad_model_train(a, ds, &to, &m, &summary) == NASVAD_OK);
  CHECK(summary.epochs_run == 1);
  CHECK(std::string(summary.stop_reason) == "max_epochs");

  nasvad_metrics met;
  char* report = nullptr;
  char* roc = nullptr;
  REQUIRE(nasvad_model_evaluate(m, ds, "all", &met, &report, &roc) == NASVAD_OK);
  CHECK(met.auc_defined == 1);
  CHECK(met.auc >= 0.0);
  CHECK(met.auc <= 1.0);
  CHECK(met.frames > 0);
  CHECK(std::string(report).find("\"auc\"") != std::string::npos);
  CHECK(std::string(roc).rfind("threshold,fpr,tpr", 0) == 0);
  nasvad_string_free(report);
  nasvad_string_free(roc);

  const std::string ckpt = dir + "/m.ckpt";
  CHECK(nasvad_model_save(m, ckpt.c_str()) == NASVAD_OK);
  nasvad_model* loaded = nullptr;
  REQUIRE(nasvad_model_load(ckpt.c_str(), &loaded) == NASVAD_OK);
  int64_t p1 = 0, p2 = 0;
  nasvad_model_param_count(m, &p1);
  nasvad_model_param_count(loaded, &p2);
  CHECK(p1 == p2);
  nasvad_metrics met2;
  REQUIRE(nasvad_model_evaluate(loaded, ds, "all", &met2, nullptr, nullptr) == NASVAD_OK);
  CHECK(met2.auc == met.auc);
  CHECK(nasvad_model_load((dir + "/none.ckpt").c_str(), &loaded) == NASVAD_ERR_IO);

  nasvad_model_free(m);
  nasvad_model_free(loaded);
  nasvad_arch_free(preset);
  nasvad_arch_free(a);
  nasvad_dataset_free(ds);
}

TEST_CASE("search") {
  const std::string dir = temp_dir("search");
  const std::string cfg = dir + "/config.json";
  {
    FILE* f = std::fopen(cfg.c_str(), "w");
    std::fputs("{\"total_evaluations\": 12, \"initial_random\": 4, \"seed\": 5,"
               " \"evaluator\": \"attention_count\"}",
               f);
    std::fclose(f);
  }
  nasvad_search* s = nullptr;
  REQUIRE(nasvad_search_run(cfg.c_str(), (dir + "/out").c_str(), 0, 1, &s) == NASVAD_OK);
  CHECK(nasvad_search_count(s) == 12);
  CHECK(nasvad_search_new_evaluations(s) == 12);
  nasvad_search_entry e0, e1;
  REQUIRE(nasvad_search_entry_at(s, 0, &e0) == NASVAD_OK);
  REQUIRE(nasvad_search_entry_at(s, 1, &e1) == NASVAD_OK);
  CHECK(e0.ok == 1);
  CHECK(e0.auc >= e1.auc);
  CHECK(std::strlen(e0.hash) == 16);
  CHECK(nasvad_search_entry_at(s, 12, &e0) == NASVAD_ERR_INVALID_ARGUMENT);
  nasvad_search_free(s);

  CHECK(nasvad_search_run(cfg.c_str(), (dir + "/out").c_str(), 0, 1, &s) ==
        NASVAD_ERR_INVALID_ARGUMENT);
  REQUIRE(nasvad_search_run(cfg.c_str(), (dir + "/out").c_str(), 1, 1, &s) == NASVAD_OK);
  CHECK(nasvad_search_new_evaluations(s) == 0);
  nasvad_search_free(s);
  CHECK(nasvad_search_run((dir + "/missing.json").c_str(), (dir + "/o2").c_str(), 0, 1, &s) ==
        NASVAD_ERR_IO);
}

}  // namespace
