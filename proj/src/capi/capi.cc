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

#include "nasvad/nasvad.h"

#include <cstring>
#include <memory>
#include <string>

#include "arch/arch_spec.h"
#include "arch/wl.h"
#include "common/error.h"
#include "common/logging.h"
#include "data/dataset.h"
#include "nn/checkpoint.h"
#include "nn/inference.h"
#include "nn/model.h"
#include "nn/train.h"
#include "search/search.h"

struct nasvad_arch {
  nasvad::ArchSpec spec;
};

struct nasvad_dataset {
  nasvad::data::Dataset data;
};

struct nasvad_model {
  std::unique_ptr<nasvad::nn::VadModel> model;
};

struct nasvad_search {
  std::vector<nasvad::search::ArchiveRecord> ranked;
  int new_evaluations = 0;
};

namespace {

thread_local std::string g_last_error;

nasvad_status to_status(nasvad::ErrorCode code) {
  switch (code) {
    case nasvad::ErrorCode::kInvalidArgument: return NASVAD_ERR_INVALID_ARGUMENT;
    case nasvad::ErrorCode::kSchema: return NASVAD_ERR_SCHEMA;
    case nasvad::ErrorCode::kIo: return NASVAD_ERR_IO;
    case nasvad::ErrorCode::kRuntime: return NASVAD_ERR_RUNTIME;
  }
  return NASVAD_ERR_RUNTIME;
}

template <typename Fn>
nasvad_status guarded(Fn fn) {
  try {
    fn();
    g_last_error.clear();
    return NASVAD_OK;
  } catch (const nasvad::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NASVAD_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NASVAD_ERR_RUNTIME;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw nasvad::InvalidArgument(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const std::vector<size_t>& split_indices(const nasvad::data::Dataset& ds, const std::string& split) {
  if (split == "train") return ds.split.train;
  if (split == "val") return ds.split.val;
  if (split == "test") return ds.split.test;
  if (split == "all") {
    static thread_local std::vector<size_t> all;
    all.resize(ds.clips.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  throw nasvad::InvalidArgument("unknown split '" + split + "' (train, val, test, all)");
}

nasvad::data::ExampleSet examples(const nasvad::data::Dataset& ds, const std::string& split,
                                  const nasvad::ArchSpec& arch) {
  if (ds.config.feature.mel_bins != arch.input_mel_bins) {
    throw nasvad::SchemaError("dataset has " + std::to_string(ds.config.feature.mel_bins) +
                              " mel bins, architecture expects " +
                              std::to_string(arch.input_mel_bins));
  }
  if (split == "all") return nasvad::data::examples_for_all(ds, arch.window_frames, arch.target_offsets);
  split_indices(ds, split);
  return nasvad::data::examples_for_split(ds, split, arch.window_frames, arch.target_offsets);
}

}  // namespace

extern "C" {

const char* nasvad_last_error(void) { return g_last_error.c_str(); }

const char* nasvad_version(void) { return "0.1.0"; }

void nasvad_set_log_level(nasvad_log_level level) {
  nasvad::set_log_level(static_cast<nasvad::LogLevel>(level));
}

void nasvad_string_free(char* s) { std::free(s); }

nasvad_status nasvad_arch_preset(const char* name, nasvad_arch** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    if (std::string(name) != "reference-cell") {
      throw nasvad::InvalidArgument("unknown preset '" + std::string(name) + "' (reference-cell)");
    }
    *out = new nasvad_arch{nasvad::reference_arch()};
  });
}

nasvad_status nasvad_arch_load(const char* path, nasvad_arch** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nasvad_arch{nasvad::load_arch(path)};
  });
}

nasvad_status nasvad_arch_from_json(const char* text, nasvad_arch** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new nasvad_arch{nasvad::deserialize_arch(text)};
  });
}

nasvad_status nasvad_arch_save(const nasvad_arch* arch, const char* path) {
  return guarded([&] {
    require(arch, "arch");
    require(path, "path");
    nasvad::save_arch(arch->spec, path);
  });
}

nasvad_status nasvad_arch_to_json(const nasvad_arch* arch, char** out) {
  return guarded([&] {
    require(arch, "arch");
    require(out, "out");
    *out = dup_string(nasvad::serialize_arch(arch->spec));
  });
}

nasvad_status nasvad_arch_hash(const nasvad_arch* arch, char* buf, size_t buf_len) {
  return guarded([&] {
    require(arch, "arch");
    require(buf, "buf");
    const std::string h = nasvad::canonical_hash(arch->spec.cell);
    if (buf_len < h.size() + 1) throw nasvad::InvalidArgument("buf_len must be at least 17");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

nasvad_status nasvad_arch_param_count(const nasvad_arch* arch, int64_t* out) {
  return guarded([&] {
    require(arch, "arch");
    require(out, "out");
    *out = nasvad::nn::count_params(*nasvad::nn::build_model(arch->spec, 0));
  });
}

nasvad_status nasvad_arch_validate(const nasvad_arch* arch, char** report) {
  return guarded([&] {
    require(arch, "arch");
    require(report, "report");
    const nasvad::ValidationReport r = nasvad::validate_arch(arch->spec);
    *report = dup_string(r.ok ? "" : r.to_string());
  });
}

void nasvad_arch_free(nasvad_arch* arch) { delete arch; }

void nasvad_synth_options_default(nasvad_synth_options* opts) {
  if (!opts) return;
  const nasvad::data::SynthDataConfig d;
  opts->seed = d.seed;
  opts->clips = d.clips;
  opts->snr_low_db = d.mix.snr_low_db;
  opts->snr_high_db = d.mix.snr_high_db;
  opts->duration_s = d.duration_s;
  opts->jobs = 1;
}

nasvad_status nasvad_dataset_synth(const nasvad_synth_options* opts, const char* out_dir) {
  return guarded([&] {
    require(opts, "opts");
    require(out_dir, "out_dir");
    nasvad::data::SynthDataConfig cfg;
    cfg.seed = opts->seed;
    cfg.clips = opts->clips;
    cfg.mix.snr_low_db = opts->snr_low_db;
    cfg.mix.snr_high_db = opts->snr_high_db;
    cfg.duration_s = opts->duration_s;
    nasvad::data::save_dataset(nasvad::data::synth_dataset(cfg, opts->jobs), out_dir);
  });
}

nasvad_status nasvad_dataset_load(const char* dir, nasvad_dataset** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = new nasvad_dataset{nasvad::data::load_dataset(dir)};
  });
}

nasvad_status nasvad_dataset_clip_count(const nasvad_dataset* ds, const char* split, int* out) {
  return guarded([&] {
    require(ds, "ds");
    require(split, "split");
    require(out, "out");
    *out = static_cast<int>(split_indices(ds->data, split).size());
  });
}

void nasvad_dataset_free(nasvad_dataset* ds) { delete ds; }

void nasvad_train_options_default(nasvad_train_options* opts) {
  if (!opts) return;
  const nasvad::nn::TrainConfig d;
  opts->max_epochs = d.max_epochs;
  opts->batch_size = d.batch_size;
  opts->initial_lr = d.initial_lr;
  opts->early_stop_patience = d.early_stop_patience;
  opts->seed = d.seed;
  opts->augment = d.augment ? 1 : 0;
}

nasvad_status nasvad_model_train(const nasvad_arch* arch, const nasvad_dataset* ds,
                                 const nasvad_train_options* opts, nasvad_model** out,
                                 nasvad_train_summary* summary) {
  return guarded([&] {
    require(arch, "arch");
    require(ds, "ds");
    require(opts, "opts");
    require(out, "out");
    nasvad::nn::TrainConfig cfg;
    cfg.max_epochs = opts->max_epochs;
    cfg.batch_size = opts->batch_size;
    cfg.initial_lr = opts->initial_lr;
    cfg.early_stop_patience = opts->early_stop_patience;
    cfg.seed = opts->seed;
    cfg.augment = opts->augment != 0;
    cfg.validate();
    const nasvad::data::ExampleSet train = examples(ds->data, "train", arch->spec);
    const nasvad::data::ExampleSet val = examples(ds->data, "val", arch->spec);
    auto model = nasvad::nn::build_model(arch->spec, cfg.seed);
    const nasvad::nn::TrainReport report = nasvad::nn::train(*model, train, val, cfg);
    if (summary) {
      summary->epochs_run = report.epochs_run;
      summary->best_epoch = report.best_epoch;
      summary->best_val_loss = report.best_val_loss;
      std::snprintf(summary->stop_reason, sizeof(summary->stop_reason), "%s",
                    report.stop_reason.c_str());
    }
    *out = new nasvad_model{std::move(model)};
  });
}

nasvad_status nasvad_model_save(const nasvad_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    nasvad::nn::save_checkpoint(*model->model, path);
  });
}

nasvad_status nasvad_model_load(const char* path, nasvad_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nasvad_model{nasvad::nn::load_checkpoint(path).model};
  });
}

nasvad_status nasvad_model_param_count(const nasvad_model* model, int64_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = nasvad::nn::count_params(*model->model);
  });
}

nasvad_status nasvad_model_evaluate(nasvad_model* model, const nasvad_dataset* ds,
                                    const char* split, nasvad_metrics* out, char** report_json,
                                    char** roc_csv) {
  return guarded([&] {
    require(model, "model");
    require(ds, "ds");
    require(split, "split");
    require(out, "out");
    const nasvad::data::ExampleSet set = examples(ds->data, split, model->model->arch());
    const nasvad::nn::SetScore score = nasvad::nn::score_set(*model->model, set);
    out->auc_defined = score.auc ? 1 : 0;
    out->auc = score.auc.value_or(0.0);
    out->f1 = score.f1;
    out->threshold = score.report.threshold;
    out->frames = static_cast<int64_t>(score.pool.scores.size());
    std::string report, roc;
    if (report_json) report = nasvad::eval::report_to_json(score.report).dump(2) + "\n";
    if (roc_csv) {
      if (!score.auc) throw nasvad::InvalidArgument("ROC undefined: only one class present");
      roc = nasvad::eval::roc_csv(nasvad::eval::roc_curve(score.pool.scores, score.pool.labels));
    }
    if (report_json) *report_json = dup_string(report);
    if (roc_csv) *roc_csv = dup_string(roc);
  });
}

void nasvad_model_free(nasvad_model* model) { delete model; }

nasvad_status nasvad_search_run(const char* config_path, const char* out_dir, int resume, int jobs,
                                nasvad_search** out) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out_dir, "out_dir");
    require(out, "out");
    const nasvad::search::SearchConfig cfg = nasvad::search::load_search_config(config_path);
    nasvad::search::SearchResult r =
        nasvad::search::run_search_in_dir(cfg, out_dir, resume != 0, jobs);
    *out = new nasvad_search{r.ranked(), r.new_evaluations};
  });
}

int nasvad_search_count(const nasvad_search* s) {
  return s ? static_cast<int>(s->ranked.size()) : 0;
}

int nasvad_search_new_evaluations(const nasvad_search* s) { return s ? s->new_evaluations : 0; }

nasvad_status nasvad_search_entry_at(const nasvad_search* s, int rank, nasvad_search_entry* out) {
  return guarded([&] {
    require(s, "search");
    require(out, "out");
    if (rank < 0 || rank >= static_cast<int>(s->ranked.size())) {
      throw nasvad::InvalidArgument("rank out of range");
    }
    const nasvad::search::ArchiveRecord& r = s->ranked[static_cast<size_t>(rank)];
    std::snprintf(out->hash, sizeof(out->hash), "%s", r.hash.c_str());
    out->ok = r.ok ? 1 : 0;
    out->auc_defined = r.auc ? 1 : 0;
    out->auc = r.auc.value_or(0.0);
    out->param_count = r.param_count;
    out->epochs_run = r.epochs_run;
    out->index = r.index;
  });
}

void nasvad_search_free(nasvad_search* s) { delete s; }

}  // extern "C"
