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

#ifndef NASVAD_NN_TRAIN_H_
#define NASVAD_NN_TRAIN_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "data/examples.h"
#include "nn/model.h"

namespace nasvad::nn {

struct TrainConfig {
  int max_epochs = 20;
  int batch_size = 32;
  double initial_lr = 1e-3;
  int early_stop_patience = 10;
  uint64_t seed = 0;
  bool augment = true;

  // max_epochs == 0 is accepted and leaves the model at initialization.
  void validate() const;
};

nlohmann::json train_config_to_json(const TrainConfig& cfg);
// Missing fields keep their defaults; unknown fields are schema errors.
TrainConfig train_config_from_json(const nlohmann::json& doc);

struct EpochStats {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::optional<double> val_auc;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;  // 0 when no epoch ran
  double best_val_loss = 0.0;
  int epochs_run = 0;
  std::string stop_reason;  // "max_epochs", "early_stop", "callback"
};

// Return false to stop after this epoch.
using EpochCallback = std::function<bool(const EpochStats&, VadModel&)>;

// Cosine-annealed learning rate for a 0-based epoch.
double cosine_lr(double initial_lr, int epoch, int max_epochs);

// Adam on masked BCE with per-epoch cosine annealing; validation loss drives
// early stopping and best-checkpoint selection. On return the model holds the
// best parameters and buffers. Throws RuntimeError on a non-finite loss.
TrainReport train(VadModel& model, const data::ExampleSet& train_set,
                  const data::ExampleSet& val_set, const TrainConfig& cfg,
                  const EpochCallback& callback = {});

}  // namespace nasvad::nn

#endif  // NASVAD_NN_TRAIN_H_
