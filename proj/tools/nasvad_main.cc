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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nasvad/nasvad.h"

namespace {

int exit_code(nasvad_status s) {
  switch (s) {
    case NASVAD_OK: return 0;
    case NASVAD_ERR_INVALID_ARGUMENT:
    case NASVAD_ERR_SCHEMA: return 1;
    default: return 2;
  }
}

// Prints the last error and maps the status to an exit code.
int fail(nasvad_status s) {
  std::cerr << "error: " << nasvad_last_error() << "\n";
  return exit_code(s);
}

bool write_text(const std::string& path, const char* text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

struct SearchArgs {
  std::string config, out;
  bool resume = false;
  int jobs = 1;
};

int run_search(const SearchArgs& a) {
  nasvad_search* s = nullptr;
  nasvad_status st = nasvad_search_run(a.config.c_str(), a.out.c_str(), a.resume ? 1 : 0, a.jobs, &s);
  if (st != NASVAD_OK) return fail(st);
  std::printf("%-5s %-16s %-10s %-10s %s\n", "rank", "hash", "auc", "params", "status");
  for (int i = 0; i < nasvad_search_count(s); ++i) {
    nasvad_search_entry e;
    nasvad_search_entry_at(s, i, &e);
    char auc[32] = "-";
    if (e.auc_defined) std::snprintf(auc, sizeof(auc), "%.6f", e.auc);
    std::printf("%-5d %-16s %-10s %-10lld %s\n", i + 1, e.hash, auc,
                static_cast<long long>(e.param_count), e.ok ? "ok" : "failed");
  }
  std::printf("new evaluations: %d\n", nasvad_search_new_evaluations(s));
  nasvad_search_free(s);
  return 0;
}

struct TrainArgs {
  std::string arch, data, out;
  nasvad_train_options opts{};
  bool no_augment = false;
};

int run_train(TrainArgs& a) {
  nasvad_arch* arch = nullptr;
  nasvad_dataset* ds = nullptr;
  nasvad_model* model = nullptr;
  nasvad_status st = nasvad_arch_load(a.arch.c_str(), &arch);
  if (st == NASVAD_OK) st = nasvad_dataset_load(a.data.c_str(), &ds);
  nasvad_train_summary summary{};
  if (st == NASVAD_OK) {
    a.opts.augment = a.no_augment ? 0 : 1;
    st = nasvad_model_train(arch, ds, &a.opts, &model, &summary);
  }
  if (st == NASVAD_OK) st = nasvad_model_save(model, a.out.c_str());
  int rc = 0;
  if (st != NASVAD_OK) {
    rc = fail(st);
  } else {
    std::printf("epochs_run %d\nbest_epoch %d\nbest_val_loss %.6f\nstop_reason %s\n",
                summary.epochs_run, summary.best_epoch, summary.best_val_loss,
                summary.stop_reason);
  }
  nasvad_model_free(model);
  nasvad_dataset_free(ds);
  nasvad_arch_free(arch);
  return rc;
}

struct EvalArgs {
  std::string checkpoint, data, split = "test", report, roc;
};

int run_eval(const EvalArgs& a) {
  nasvad_model* model = nullptr;
  nasvad_dataset* ds = nullptr;
  nasvad_status st = nasvad_model_load(a.checkpoint.c_str(), &model);
  if (st == NASVAD_OK) st = nasvad_dataset_load(a.data.c_str(), &ds);
  nasvad_metrics m{};
  char* report = nullptr;
  char* roc = nullptr;
  if (st == NASVAD_OK) {
    st = nasvad_model_evaluate(model, ds, a.split.c_str(), &m, a.report.empty() ? nullptr : &report,
                               a.roc.empty() ? nullptr : &roc);
  }
  int rc = 0;
  if (st != NASVAD_OK) {
    rc = fail(st);
  } else {
    if (m.auc_defined) {
      std::printf("AUC %.17g\n", m.auc);
    } else {
      std::printf("AUC undefined\n");
    }
    std::printf("F1 %.17g\nthreshold %g\nframes %lld\n", m.f1, m.threshold,
                static_cast<long long>(m.frames));
    if (report && !write_text(a.report, report)) {
      std::cerr << "error: cannot write " << a.report << "\n";
      rc = 2;
    }
    if (roc && !write_text(a.roc, roc)) {
      std::cerr << "error: cannot write " << a.roc << "\n";
      rc = 2;
    }
  }
  nasvad_string_free(report);
  nasvad_string_free(roc);
  nasvad_dataset_free(ds);
  nasvad_model_free(model);
  return rc;
}

int run_params(const std::string& path) {
  nasvad_arch* arch = nullptr;
  nasvad_status st = nasvad_arch_load(path.c_str(), &arch);
  int64_t n = 0;
  if (st == NASVAD_OK) st = nasvad_arch_param_count(arch, &n);
  nasvad_arch_free(arch);
  if (st != NASVAD_OK) return fail(st);
  std::printf("%lld\n", static_cast<long long>(n));
  return 0;
}

int run_export(const std::string& preset, const std::string& out) {
  nasvad_arch* arch = nullptr;
  nasvad_status st = nasvad_arch_preset(preset.c_str(), &arch);
  if (st == NASVAD_OK) st = nasvad_arch_save(arch, out.c_str());
  nasvad_arch_free(arch);
  if (st != NASVAD_OK) return fail(st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-based architecture search for voice activity detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nasvad_version());
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Log progress (per-epoch losses, warnings)");
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  SearchArgs search;
  CLI::App* c_search = app.add_subcommand("search", "Run the Bayesian-optimization search");
  c_search->add_option("--config", search.config, "Search config JSON")->required()->check(CLI::ExistingFile);
  c_search->add_option("--out", search.out, "Output directory (archive.jsonl, best_arch.json)")->required();
  c_search->add_flag("--resume", search.resume, "Continue an existing archive in --out");
  c_search->add_option("--jobs", search.jobs, "Parallel evaluations per batch (1 = deterministic)")
      ->check(CLI::PositiveNumber);

  TrainArgs train;
  nasvad_train_options_default(&train.opts);
  CLI::App* c_train = app.add_subcommand("train", "Train an architecture and write a checkpoint");
  c_train->add_option("--arch", train.arch, "Architecture JSON")->required();
  c_train->add_option("--data", train.data, "Dataset directory")->required();
  c_train->add_option("--epochs", train.opts.max_epochs, "Maximum epochs (0 keeps the init)")
      ->required()->check(CLI::NonNegativeNumber);
  c_train->add_option("--out", train.out, "Checkpoint path")->required();
  c_train->add_option("--seed", train.opts.seed, "Init, shuffle and augmentation seed")->capture_default_str();
  c_train->add_option("--batch-size", train.opts.batch_size, "Batch size")->capture_default_str();
  c_train->add_option("--lr", train.opts.initial_lr, "Initial learning rate")->capture_default_str();
  c_train->add_option("--patience", train.opts.early_stop_patience,
                      "Early-stop patience in epochs (capped at --epochs)");
  c_train->add_flag("--no-augment", train.no_augment, "Disable volume scaling and frequency masking");

  EvalArgs ev;
  CLI::App* c_eval = app.add_subcommand("eval", "Evaluate a checkpoint (boosted AUC and F1)");
  c_eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint path")->required();
  c_eval->add_option("--data", ev.data, "Dataset directory")->required();
  c_eval->add_option("--split", ev.split, "train, val, test or all")
      ->check(CLI::IsMember({"train", "val", "test", "all"}))->capture_default_str();
  c_eval->add_option("--report", ev.report, "Write the JSON metric report here");
  c_eval->add_option("--roc", ev.roc, "Write ROC points (CSV) here");

  nasvad_synth_options synth;
  nasvad_synth_options_default(&synth);
  std::string synth_out;
  CLI::App* c_synth = app.add_subcommand("synth-data", "Generate a synthetic dataset");
  c_synth->add_option("--out", synth_out, "Output directory")->required();
  c_synth->add_option("--seed", synth.seed, "Corpus seed")->capture_default_str();
  c_synth->add_option("--clips", synth.clips, "Number of clips")->capture_default_str();
  c_synth->add_option("--snr-low", synth.snr_low_db, "Lowest SNR in dB")->capture_default_str();
  c_synth->add_option("--snr-high", synth.snr_high_db, "Highest SNR in dB")->capture_default_str();
  c_synth->add_option("--duration", synth.duration_s, "Clean clip length in seconds")->capture_default_str();
  c_synth->add_option("--jobs", synth.jobs, "Generator threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string params_arch;
  CLI::App* c_params = app.add_subcommand("params", "Print the learnable parameter count");
  c_params->add_option("--arch", params_arch, "Architecture JSON")->required();

  std::string preset = "reference-cell";
  std::string export_out;
  CLI::App* c_export = app.add_subcommand("export-arch", "Write a preset architecture");
  c_export->add_option("--preset", preset, "Preset name")
      ->check(CLI::IsMember({"reference-cell"}))
      ->capture_default_str();
  c_export->add_option("--out", export_out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (verbose) nasvad_set_log_level(NASVAD_LOG_INFO);
  if (quiet) nasvad_set_log_level(NASVAD_LOG_ERROR);

  if (*c_search) return run_search(search);
  if (*c_train) {
    if (train.opts.max_epochs > 0 && train.opts.early_stop_patience > train.opts.max_epochs) {
      train.opts.early_stop_patience = train.opts.max_epochs;
    }
    return run_train(train);
  }
  if (*c_eval) return run_eval(ev);
  if (*c_synth) {
    const nasvad_status st = nasvad_dataset_synth(&synth, synth_out.c_str());
    if (st != NASVAD_OK) return fail(st);
    std::printf("wrote %d clips to %s\n", synth.clips, synth_out.c_str());
    return 0;
  }
  if (*c_params) return run_params(params_arch);
  if (*c_export) return run_export(preset, export_out);
  return 1;
}
