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

#ifndef NASVAD_ARCH_ARCH_SPEC_H_
#define NASVAD_ARCH_ARCH_SPEC_H_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arch/cell.h"

namespace nasvad {

inline constexpr int kArchFormatVersion = 1;

// A searched cell plus the fixed macro skeleton around it.
struct ArchSpec {
  CellSpec cell;
  int base_channels = 16;
  int num_cells = 4;
  int reduction_index = 2;  // 1-based cell index where the feature axis is halved
  int input_mel_bins = 80;
  int window_frames = 64;
  std::vector<int> target_offsets = {-19, -10, -1, 0, 1, 10, 19};

  bool operator==(const ArchSpec&) const = default;
};

ValidationReport validate_arch(const ArchSpec& arch);

// reference_cell() with the default macro parameters.
ArchSpec reference_arch();

nlohmann::json arch_to_json(const ArchSpec& arch);
ArchSpec arch_from_json(const nlohmann::json& doc);

std::string serialize_arch(const ArchSpec& arch);
ArchSpec deserialize_arch(std::string_view document);

ArchSpec load_arch(const std::string& path);
void save_arch(const ArchSpec& arch, const std::string& path);

}  // namespace nasvad

#endif  // NASVAD_ARCH_ARCH_SPEC_H_
