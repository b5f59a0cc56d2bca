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

#ifndef NASVAD_SEARCH_EVALUATE_H_
#define NASVAD_SEARCH_EVALUATE_H_

#include <cstdint>
#include <functional>

#include "arch/arch_spec.h"
#include "data/examples.h"
#include "nn/train.h"
#include "search/archive.h"

namespace nasvad::search {

// Maps (arch, seed) to a filled record (index is set by the caller). Must not
// throw for candidate-specific failures.
using Evaluator = std::function<ArchiveRecord(const ArchSpec&, uint64_t seed)>;

// Builds, trains and scores on the boosted validation AUC. Invalid cells,
// construction errors, non-finite losses and single-class validation sets
// produce failed records.
ArchiveRecord evaluate_arch(const ArchSpec& arch, const data::ExampleSet& train_set,
                            const data::ExampleSet& val_set, const nn::TrainConfig& cfg,
                            uint64_t seed);

// Cheap benchmark score: attention edges / 6. No training.
ArchiveRecord evaluate_attention_count(const ArchSpec& arch, uint64_t seed);

}  // namespace nasvad::search

#endif  // NASVAD_SEARCH_EVALUATE_H_
