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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NASVAD_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const char* tag) {
  auto p = std::filesystem::temp_directory_path() /
           (std::string("nasvad_cli_") + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

TEST_CASE("usage and exit codes") {
  Run v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find("0.1.0") != std::string::npos);
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("train --arch x.json").code == 1);
  Run missing = run("params --arch /nonexistent/a.json");
  CHECK(missing.code == 2);
  CHECK(missing.out.find("/nonexistent/a.json") != std::string::npos);
  CHECK(run("synth-data --out /tmp/x --jobs 0").code == 1);
}

TEST_CASE("architecture commands") {
  const std::string dir = temp_dir("arch");
  REQUIRE(run("export-arch --preset reference-cell --out " + dir + "/a.json").code == 0);
  Run p = run("params --arch " + dir + "/a.json");
  CHECK(p.code == 0);
  CHECK(p.out == "144899\n");
  std::string text = read_file(dir + "/a.json");
  const size_t pos = text.find("SE_025");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 6, "SE_050");
  std::ofstream(dir + "/bad.json") << text;
  Run bad = run("params --arch " + dir + "/bad.json");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("unknown operation 'SE_050'") != std::string::npos);
}

TEST_CASE("data, train, eval") {
  const std::string dir = temp_dir("train");
  REQUIRE(run("synth-data --out " + dir + "/d1 --clips 4 --duration 1 --seed 2").code == 0);
  REQUIRE(run("synth-data --out " + dir + "/d2 --clips 4 --duration 1 --seed 2 --jobs 2").code == 0);
  CHECK(read_file(dir + "/d1/manifest.json") == read_file(dir + "/d2/manifest.json"));
  CHECK(read_file(dir + "/d1/clip_0002.rec") == read_file(dir + "/d2/clip_0002.rec"));
  CHECK(run("synth-data --out " + dir + "/d3 --snr-low 5 --snr-high -5").code == 1);

  REQUIRE(run("export-arch --out " + dir + "/a.json").code == 0);
  std::string text = read_file(dir + "/a.json");
  text.replace(text.find("\"base_channels\": 16"), 19, "\"base_channels\": 8");
  text.replace(text.find("\"num_cells\": 4"), 14, "\"num_cells\": 2");
  std::ofstream(dir + "/small.json") << text;

  Run t = run("-q train --arch " + dir + "/small.json --data " + dir + "/d1 --epochs 1 --out " +
              dir + "/m.ckpt");
  CHECK(t.code == 0);
  CHECK(t.out.find("epochs_run 1") != std::string::npos);
  Run e = run("eval --checkpoint " + dir + "/m.ckpt --data " + dir + "/d1 --split all --report " +
              dir + "/r.json --roc " + dir + "/roc.csv");
  CHECK(e.code == 0);
  CHECK(e.out.rfind("AUC ", 0) == 0);
  CHECK(e.out.find("F1 ") != std::string::npos);
  CHECK(read_file(dir + "/r.json").find("\"arch_hash\"") != std::string::npos);
  CHECK(read_file(dir + "/roc.csv").rfind("threshold,fpr,tpr\n", 0) == 0);
  CHECK(run("eval --checkpoint " + dir + "/m.ckpt --data " + dir + "/d1 --split dev").code == 1);
  CHECK(run("eval --checkpoint " + dir + "/none.ckpt --data " + dir + "/d1").code == 2);
}

TEST_CASE("search") {
  const std::string dir = temp_dir("search");
  std::ofstream(dir + "/cfg.json")
      << R"({"total_evaluations": 14, "initial_random": 6, "seed": 3, "evaluator": "attention_count"})";
  Run s = run("search --config " + dir + "/cfg.json --out " + dir + "/out");
  CHECK(s.code == 0);
  CHECK(s.out.find("rank") != std::string::npos);
  CHECK(std::filesystem::exists(dir + "/out/archive.jsonl"));
  CHECK(std::filesystem::exists(dir + "/out/best_arch.json"));
  const std::string archive = read_file(dir + "/out/archive.jsonl");
  CHECK(std::count(archive.begin(), archive.end(), '\n') == 14);
  Run again = run("search --config " + dir + "/cfg.json --out " + dir + "/out");
  CHECK(again.code == 1);
  CHECK(again.out.find("--resume") != std::string::npos);
  Run resumed = run("search --config " + dir + "/cfg.json --out " + dir + "/out --resume");
  CHECK(resumed.code == 0);
  CHECK(resumed.out.find("new evaluations: 0") != std::string::npos);
  CHECK(run("params --arch " + dir + "/out/best_arch.json").code == 0);

  std::ofstream(dir + "/bad.json") << R"({"total_evaluations": 5, "initial_random": 9})";
  Run bad = run("search --config " + dir + "/bad.json --out " + dir + "/out2");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("initial_random (9) must not exceed total_evaluations (5)") !=
        std::string::npos);
  std::ofstream(dir + "/unknown.json") << R"({"budget": 5})";
  CHECK(run("search --config " + dir + "/unknown.json --out " + dir + "/out3").code == 1);
}

}  // namespace
