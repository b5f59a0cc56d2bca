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

#ifndef NASVAD_NASVAD_H_
#define NASVAD_NASVAD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NASVAD_API __declspec(dllexport)
#else
#define NASVAD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nasvad_status {
  NASVAD_OK = 0,
  NASVAD_ERR_INVALID_ARGUMENT = 1,
  NASVAD_ERR_SCHEMA = 2,
  NASVAD_ERR_IO = 3,
  NASVAD_ERR_RUNTIME = 4,
} nasvad_status;

typedef enum nasvad_log_level {
  NASVAD_LOG_DEBUG = 0,
  NASVAD_LOG_INFO = 1,
  NASVAD_LOG_WARNING = 2,
  NASVAD_LOG_ERROR = 3,
  NASVAD_LOG_SILENT = 4,
} nasvad_log_level;

typedef struct nasvad_arch nasvad_arch;
typedef struct nasvad_dataset nasvad_dataset;
typedef struct nasvad_model nasvad_model;
typedef struct nasvad_search nasvad_search;

// Message of the last failed call on this thread; "" after a success.
NASVAD_API const char* nasvad_last_error(void);
NASVAD_API const char* nasvad_version(void);
NASVAD_API void nasvad_set_log_level(nasvad_log_level level);

// Strings returned through char** are owned by the caller.
NASVAD_API void nasvad_string_free(char* s);

// Architectures. Preset names: "reference-cell".
NASVAD_API nasvad_status nasvad_arch_preset(const char* name, nasvad_arch** out);
NASVAD_API nasvad_status nasvad_arch_load(const char* path, nasvad_arch** out);
NASVAD_API nasvad_status nasvad_arch_from_json(const char* text, nasvad_arch** out);
NASVAD_API nasvad_status nasvad_arch_save(const nasvad_arch* arch, const char* path);
NASVAD_API nasvad_status nasvad_arch_to_json(const nasvad_arch* arch, char** out);
// Writes the 16 hex digit canonical cell hash plus NUL; buf_len >= 17.
NASVAD_API nasvad_status nasvad_arch_hash(const nasvad_arch* arch, char* buf, size_t buf_len);
NASVAD_API nasvad_status nasvad_arch_param_count(const nasvad_arch* arch, int64_t* out);
// Newline-separated validation violations; "" when valid.
NASVAD_API nasvad_status nasvad_arch_validate(const nasvad_arch* arch, char** report);
NASVAD_API void nasvad_arch_free(nasvad_arch* arch);

// Datasets.
typedef struct nasvad_synth_options {
  uint64_t seed;
  int clips;
  double snr_low_db;
  double snr_high_db;
  double duration_s;
  int jobs;
} nasvad_synth_options;

NASVAD_API void nasvad_synth_options_default(nasvad_synth_options* opts);
NASVAD_API nasvad_status nasvad_dataset_synth(const nasvad_synth_options* opts, const char* out_dir);
NASVAD_API nasvad_status nasvad_dataset_load(const char* dir, nasvad_dataset** out);
NASVAD_API nasvad_status nasvad_dataset_clip_count(const nasvad_dataset* ds, const char* split,
                                                   int* out);
NASVAD_API void nasvad_dataset_free(nasvad_dataset* ds);

// Training and evaluation.
typedef struct nasvad_train_options {
  int max_epochs;
  int batch_size;
  double initial_lr;
  int early_stop_patience;
  uint64_t seed;
  int augment;
} nasvad_train_options;

typedef struct nasvad_train_summary {
  int epochs_run;
  int best_epoch;
  double best_val_loss;
  char stop_reason[16];
} nasvad_train_summary;

typedef struct nasvad_metrics {
  double auc;
  int auc_defined;
  double f1;
  double threshold;
  int64_t frames;
} nasvad_metrics;

NASVAD_API void nasvad_train_options_default(nasvad_train_options* opts);
// Builds from `arch` with opts->seed, trains on the "train" split with
// "val" for early stopping. `summary` may be NULL.
NASVAD_API nasvad_status nasvad_model_train(const nasvad_arch* arch, const nasvad_dataset* ds,
                                            const nasvad_train_options* opts, nasvad_model** out,
                                            nasvad_train_summary* summary);
NASVAD_API nasvad_status nasvad_model_save(const nasvad_model* model, const char* path);
NASVAD_API nasvad_status nasvad_model_load(const char* path, nasvad_model** out);
NASVAD_API nasvad_status nasvad_model_param_count(const nasvad_model* model, int64_t* out);
// Boosted AUC and F1 (threshold 0.5) on a split. report_json and roc_csv may
// be NULL.
NASVAD_API nasvad_status nasvad_model_evaluate(nasvad_model* model, const nasvad_dataset* ds,
                                               const char* split, nasvad_metrics* out,
                                               char** report_json, char** roc_csv);
NASVAD_API void nasvad_model_free(nasvad_model* model);

// Search.
typedef struct nasvad_search_entry {
  char hash[17];
  int ok;
  int auc_defined;
  double auc;
  int64_t param_count;
  int epochs_run;
  int index;
} nasvad_search_entry;

// Runs the search described by the config file, archive under out_dir.
NASVAD_API nasvad_status nasvad_search_run(const char* config_path, const char* out_dir,
                                           int resume, int jobs, nasvad_search** out);
NASVAD_API int nasvad_search_count(const nasvad_search* s);
NASVAD_API int nasvad_search_new_evaluations(const nasvad_search* s);
// Entry by rank (0 = best AUC).
NASVAD_API nasvad_status nasvad_search_entry_at(const nasvad_search* s, int rank,
                                                nasvad_search_entry* out);
NASVAD_API void nasvad_search_free(nasvad_search* s);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // NASVAD_NASVAD_H_
