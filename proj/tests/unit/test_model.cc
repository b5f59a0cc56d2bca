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

#include <cmath>
#include <fstream>

#include "doctest.h"

#include "arch/arch_spec.h"
#include "arch/cell.h"
#include "common/error.h"
#include "common/rng.h"
#include "nn/checkpoint.h"
#include "nn/model.h"
#include "test_support.h"

namespace nasvad::nn {
namespace {

TEST_CASE("reference model parameter count") {
  auto m = build_model(reference_arch(), 0);
  CHECK(count_params(*m) == 144899);
  CHECK(count_params(*m) == m->store().count());
  auto small = build_model(testing::tiny_arch(reference_cell(), 8, 80, 64), 0);
  CHECK(count_params(*small) == 48293);
}

TEST_CASE("head parameter count follows the final geometry") {
  ArchSpec a = testing::tiny_arch(reference_cell(), 8, 10, 6);
  auto m = build_model(a, 1);
  const CellGeometry last = m->geometry().back();
  for (const auto& p : m->store().parameters()) {
    if (p.name == "head.weight") {
      CHECK(p.var.shape() == Shape{7, 3 * last.channels * last.features});
    }
  }
}

TEST_CASE("forward shapes follow the macro contract") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng(seed);
    ArchSpec a;
    a.cell = random_cell(seed);
    a.base_channels = 4 * static_cast<int>(rng.uniform_int(1, 2));
    a.num_cells = static_cast<int>(rng.uniform_int(1, 4));
    a.reduction_index = static_cast<int>(rng.uniform_int(1, a.num_cells));
    a.input_mel_bins = static_cast<int>(rng.uniform_int(5, 12));
    a.window_frames = static_cast<int>(rng.uniform_int(3, 8));
    a.target_offsets = {-2, 0, 3};
    auto m = build_model(a, seed);
    ForwardTrace trace;
    NoGradGuard guard;
    Var out = m->forward(Var(testing::random_tensor({2, 1, a.window_frames, a.input_mel_bins},
                                                    seed)),
                         true, &trace);
    CHECK(out.shape() == Shape{2, a.window_frames, 3});
    CHECK(trace.logits == out.shape());
    CHECK(trace.stem == Shape{2, a.base_channels, a.window_frames, a.input_mel_bins});
    REQUIRE(trace.cell_outputs.size() == static_cast<size_t>(a.num_cells));
    for (int i = 0; i < a.num_cells; ++i) {
      const bool reduced = i + 1 >= a.reduction_index;
      const int c = reduced ? 2 * a.base_channels : a.base_channels;
      const int f = reduced ? (a.input_mel_bins + 1) / 2 : a.input_mel_bins;
      CHECK(trace.cell_outputs[i] == Shape{2, 3 * c, a.window_frames, f});
      CHECK(trace.cell_inputs_prev[i] == Shape{2, c, a.window_frames, f});
      CHECK(trace.cell_inputs_prev_prev[i] == Shape{2, c, a.window_frames, f});
    }
    const auto geo = cell_geometry(a);
    CHECK(geo.size() == m->geometry().size());
  }
}

TEST_CASE("model determinism and eval probabilities") {
  ArchSpec a = testing::tiny_arch(reference_cell());
  auto m1 = build_model(a, 7);
  auto m2 = build_model(a, 7);
  auto m3 = build_model(a, 8);
  Tensor x = testing::random_tensor({3, 1, 6, 10}, 1);
  Tensor p1 = m1->predict(x);
  CHECK(p1 == m2->predict(x));
  CHECK_FALSE(p1 == m3->predict(x));
  for (int64_t i = 0; i < p1.numel(); ++i) {
    CHECK(p1[i] > 0.0);
    CHECK(p1[i] < 1.0);
  }
  // Eval mode does not depend on the other batch members.
  Tensor one({1, 1, 6, 10});
  std::copy(x.data(), x.data() + 60, one.data());
  Tensor p_one = m1->predict(one);
  for (int64_t i = 0; i < p_one.numel(); ++i) CHECK(p_one[i] == doctest::Approx(p1[i]));
}

TEST_CASE("invalid architectures are rejected") {
  ArchSpec a = testing::tiny_arch(reference_cell());
  a.cell.edges[0].target = 4;
  CHECK_THROWS_AS(build_model(a, 0), Error);
  a = testing::tiny_arch(reference_cell(), 6);
  try {
    build_model(a, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchema);
  }
}

TEST_CASE("model gradients at C=8") {
  testing::GradCheckOptions o;
  o.step = 1e-5;
  o.floor = 1e-3;
  o.max_coords_per_leaf = 3;
  auto r = testing::check_model_gradients(testing::tiny_arch(reference_cell()), 2, 3, o);
  CAPTURE(r.worst);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("checkpoint round trip") {
  ArchSpec a = testing::tiny_arch(reference_cell());
  auto m = build_model(a, 5);
  // Move the batch-norm buffers away from their initial values.
  {
    NoGradGuard guard;
    m->forward(Var(testing::random_tensor({2, 1, 6, 10}, 2)), true);
  }
  const std::string dir = testing::make_temp_dir("ckpt");
  save_checkpoint(*m, dir + "/m.ckpt", {{"note", "x"}});
  LoadedCheckpoint loaded = load_checkpoint(dir + "/m.ckpt");
  CHECK(loaded.model->arch() == a);
  CHECK(loaded.model->seed() == 5);
  CHECK(loaded.header.at("extra").at("note") == "x");
  const auto& p1 = m->store().parameters();
  const auto& p2 = loaded.model->store().parameters();
  REQUIRE(p1.size() == p2.size());
  for (size_t i = 0; i < p1.size(); ++i) CHECK(p1[i].var.value() == p2[i].var.value());
  const auto& b1 = m->store().buffers();
  const auto& b2 = loaded.model->store().buffers();
  REQUIRE(b1.size() == b2.size());
  for (size_t i = 0; i < b1.size(); ++i) CHECK(*b1[i].tensor == *b2[i].tensor);
  Tensor x = testing::random_tensor({2, 1, 6, 10}, 3);
  CHECK(m->predict(x) == loaded.model->predict(x));

  SUBCASE("corrupt files") {
    {
      std::ofstream(dir + "/bad.ckpt") << "NOTACKPT";
    }
    CHECK_THROWS_AS(load_checkpoint(dir + "/bad.ckpt"), Error);
    CHECK_THROWS_AS(load_checkpoint(dir + "/missing.ckpt"), Error);
    std::ifstream in(dir + "/m.ckpt", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    {
      std::ofstream(dir + "/short.ckpt", std::ios::binary) << bytes.substr(0, bytes.size() - 8);
    }
    CHECK_THROWS_AS(load_checkpoint(dir + "/short.ckpt"), Error);
  }
}

}  // namespace
}  // namespace nasvad::nn
