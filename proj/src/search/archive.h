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

#ifndef NASVAD_SEARCH_ARCHIVE_H_
#define NASVAD_SEARCH_ARCHIVE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arch/arch_spec.h"

namespace nasvad::search {

struct ArchiveRecord {
  int index = 0;  // 0-based evaluation order
  ArchSpec arch;
  std::string hash;
  bool ok = false;
  std::string reason;         // failure reason when !ok
  std::optional<double> auc;  // the search metric
  int64_t param_count = 0;
  int epochs_run = 0;
  double seconds = 0.0;
  uint64_t seed = 0;
};

nlohmann::json record_to_json(const ArchiveRecord& r);
ArchiveRecord record_from_json(const nlohmann::json& doc);

// Serialized record minus wall-clock time; equal for reproduced evaluations.
std::string record_fingerprint(const ArchiveRecord& r);

// One JSON record per line. Appends are flushed before returning.
class ArchiveWriter {
 public:
  // truncate = true starts a fresh file.
  ArchiveWriter(std::string path, bool truncate);
  void append(const ArchiveRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Empty vector when the file does not exist. A torn final line (no trailing
// newline) is dropped with a warning; any other malformed line is an error.
std::vector<ArchiveRecord> read_archive(const std::string& path);

// Rewrites the file with exactly these records.
void write_archive(const std::vector<ArchiveRecord>& records, const std::string& path);

// ok records by descending AUC, then failed ones; ties keep archive order.
std::vector<ArchiveRecord> sorted_by_auc(std::vector<ArchiveRecord> records);

}  // namespace nasvad::search

#endif  // NASVAD_SEARCH_ARCHIVE_H_
