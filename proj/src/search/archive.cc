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

#include "search/archive.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common/error.h"
#include "common/logging.h"

namespace nasvad::search {

nlohmann::json record_to_json(const ArchiveRecord& r) {
  nlohmann::json j = {{"index", r.index},
                      {"hash", r.hash},
                      {"status", r.ok ? "ok" : "failed"},
                      {"reason", r.reason},
                      {"auc", nullptr},
                      {"param_count", r.param_count},
                      {"epochs_run", r.epochs_run},
                      {"seconds", r.seconds},
                      {"seed", r.seed},
                      {"arch", arch_to_json(r.arch)}};
  if (r.auc) j["auc"] = *r.auc;
  return j;
}

ArchiveRecord record_from_json(const nlohmann::json& j) {
  try {
    ArchiveRecord r;
    r.index = j.at("index").get<int>();
    r.hash = j.at("hash").get<std::string>();
    const std::string status = j.at("status").get<std::string>();
    if (status != "ok" && status != "failed") throw SchemaError("bad status '" + status + "'");
    r.ok = status == "ok";
    r.reason = j.at("reason").get<std::string>();
    if (!j.at("auc").is_null()) r.auc = j.at("auc").get<double>();
    r.param_count = j.at("param_count").get<int64_t>();
    r.epochs_run = j.at("epochs_run").get<int>();
    r.seconds = j.at("seconds").get<double>();
    r.seed = j.at("seed").get<uint64_t>();
    r.arch = arch_from_json(j.at("arch"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("archive record: ") + e.what());
  }
}

std::string record_fingerprint(const ArchiveRecord& r) {
  nlohmann::json j = record_to_json(r);
  j.erase("seconds");
  return j.dump();
}

ArchiveWriter::ArchiveWriter(std::string path, bool truncate) : path_(std::move(path)) {
  std::ofstream out(path_, truncate ? std::ios::trunc : std::ios::app);
  if (!out) throw IoError("cannot open archive for writing: " + path_);
}

void ArchiveWriter::append(const ArchiveRecord& r) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to archive: " + path_);
  out << record_to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw IoError("failed appending to archive: " + path_);
}

std::vector<ArchiveRecord> read_archive(const std::string& path) {
  std::vector<ArchiveRecord> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open archive: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    const size_t nl = text.find('\n', pos);
    ++lineno;
    if (nl == std::string::npos) {
      NASVAD_LOG(kWarning, path << ": dropping incomplete final line " << lineno);
      break;
    }
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw SchemaError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_archive(const std::vector<ArchiveRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write archive: " + path);
  for (const ArchiveRecord& r : records) out << record_to_json(r).dump() << '\n';
  if (!out) throw IoError("failed writing archive: " + path);
}

std::vector<ArchiveRecord> sorted_by_auc(std::vector<ArchiveRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ArchiveRecord& a, const ArchiveRecord& b) {
                     const bool ga = a.ok && a.auc.has_value();
                     const bool gb = b.ok && b.auc.has_value();
                     if (ga != gb) return ga;
                     if (!ga) return false;
                     return *a.auc > *b.auc;
                   });
  return records;
}

}  // namespace nasvad::search
