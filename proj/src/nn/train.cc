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

#include "nn/train.h"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "common/error.h"
#include "common/logging.h"
#include "common/rng.h"
#include "nn/inference.h"

namespace nasvad::nn {

void TrainConfig::validate() const {
  if (max_epochs < 0) throw SchemaError("train.max_epochs must be >= 0");
  if (batch_size <= 0) throw SchemaError("train.batch_size must be positive");
  if (!(initial_lr > 0) || !std::isfinite(initial_lr)) {
    throw SchemaError("train.initial_lr must be positive");
  }
  if (early_stop_patience <= 0) throw SchemaError("train.early_stop_patience must be positive");
  if (max_epochs > 0 && early_stop_patience > max_epochs) {
    throw SchemaError("train.early_stop_patience must not exceed train.max_epochs");
  }
}

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
  return {{"max_epochs", cfg.max_epochs},
          {"batch_size", cfg.batch_size},
          {"initial_lr", cfg.initial_lr},
          {"early_stop_patience", cfg.early_stop_patience},
          {"seed", cfg.seed},
          {"augment", cfg.augment}};
}

TrainConfig train_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("train: expected an object");
  TrainConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "max_epochs") {
        cfg.max_epochs = value.get<int>();
      } else if (key == "batch_size") {
        cfg.batch_size = value.get<int>();
      } else if (key == "initial_lr") {
        cfg.initial_lr = value.get<double>();
      } else if (key == "early_stop_patience") {
        cfg.early_stop_patience = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<uint64_t>();
      } else if (key == "augment") {
        cfg.augment = value.get<bool>();
      } else {
        throw SchemaError("train: unknown field '" + key + "'");
      }
    } catch (const nlohmann::json::exception&) {
      throw SchemaError("train." + key + ": wrong type");
    }
  }
  cfg.validate();
  return cfg;
}

double cosine_lr(double initial_lr, int epoch, int max_epochs) {
  if (max_epochs <= 0) return initial_lr;
  return 0.5 * initial_lr * (1.0 + std::cos(std::numbers::pi * epoch / max_epochs));
}

namespace {

class Adam {
 public:
  Adam(const std::vector<NamedParameter>& params, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : params_(params), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const NamedParameter& p : params_) {
      m_.emplace_back(p.var.shape());
      v_.emplace_back(p.var.shape());
    }
  }

  void step(double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    for (size_t i = 0; i < params_.size(); ++i) {
      Var var = params_[i].var;
      const Tensor& g = var.grad();
      if (g.numel() == 0) continue;
      double* w = var.mutable_value().data();
      double* m = m_[i].data();
      double* v = v_[i].data();
      for (int64_t j = 0; j < g.numel(); ++j) {
        m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
        v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
        w[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
      }
    }
  }

 private:
  std::vector<NamedParameter> params_;
  std::vector<Tensor> m_, v_;
  double beta1_, beta2_, eps_;
  int t_ = 0;
};

struct Snapshot {
  std::vector<Tensor> params;
  std::vector<Tensor> buffers;
};

Snapshot take_snapshot(const ParameterStore& store) {
  Snapshot s;
  for (const NamedParameter& p : store.parameters()) s.params.push_back(p.var.value());
  for (const NamedBuffer& b : store.buffers()) s.buffers.push_back(*b.tensor);
  return s;
}

void restore_snapshot(ParameterStore& store, const Snapshot& s) {
  for (size_t i = 0; i < s.params.size(); ++i) {
    Var v = store.parameters()[i].var;
    v.mutable_value() = s.params[i];
  }
  for (size_t i = 0; i < s.buffers.size(); ++i) *store.buffers()[i].tensor = s.buffers[i];
}

}  // namespace

TrainReport train(VadModel& model, const data::ExampleSet& train_set,
                  const data::ExampleSet& val_set, const TrainConfig& cfg,
                  const EpochCallback& callback) {
  cfg.validate();
  if (train_set.size() == 0) throw InvalidArgument("train: empty training set");
  if (val_set.size() == 0) throw InvalidArgument("train: empty validation set");
  const ArchSpec& arch = model.arch();
  for (const data::ExampleSet* s : {&train_set, &val_set}) {
    if (s->window_frames != arch.window_frames || s->mel_bins != arch.input_mel_bins ||
        s->offsets != arch.target_offsets) {
      throw InvalidArgument("train: example geometry does not match the architecture");
    }
  }

  TrainReport report;
  report.stop_reason = "max_epochs";
  ParameterStore& store = model.store();
  Adam adam(store.parameters());
  Rng shuffle_rng(derive_seed(cfg.seed, 11));
  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), size_t{0});

  Snapshot best;
  int since_best = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.lr = cosine_lr(cfg.initial_lr, epoch, cfg.max_epochs);
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
      std::vector<size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                              order.begin() + static_cast<std::ptrdiff_t>(end));
      std::vector<uint64_t> seeds;
      if (cfg.augment) {
        for (size_t i : idx) seeds.push_back(derive_seed(cfg.seed, 12 + static_cast<uint64_t>(epoch), i));
      }
      Batch batch = make_batch(train_set, idx, seeds);
      store.zero_grad();
      Var logits = model.forward(Var(batch.input), true);
      Var loss = masked_bce_with_logits(logits, batch.labels, batch.mask);
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "non-finite loss at epoch " << epoch + 1 << ", batch " << batches;
        throw RuntimeError(os.str());
      }
      backward(loss);
      adam.step(stats.lr);
      loss_sum += value;
      ++batches;
    }
    stats.train_loss = loss_sum / batches;
    stats.val_loss = set_loss(model, val_set, cfg.batch_size);
    if (!std::isfinite(stats.val_loss)) {
      throw RuntimeError("non-finite validation loss at epoch " + std::to_string(epoch + 1));
    }
    stats.val_auc = score_set(model, val_set, cfg.batch_size).auc;
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.epochs.push_back(stats);
    report.epochs_run = epoch + 1;
    NASVAD_LOG(kInfo, "epoch " << stats.epoch << " lr " << stats.lr << " train_loss "
                               << stats.train_loss << " val_loss " << stats.val_loss);

    if (report.best_epoch == 0 || stats.val_loss < report.best_val_loss) {
      report.best_epoch = stats.epoch;
      report.best_val_loss = stats.val_loss;
      best = take_snapshot(store);
      since_best = 0;
    } else {
      ++since_best;
    }
    if (callback && !callback(stats, model)) {
      report.stop_reason = "callback";
      break;
    }
    if (since_best >= cfg.early_stop_patience) {
      if (report.epochs_run < cfg.max_epochs) report.stop_reason = "early_stop";
      break;
    }
  }
  if (report.best_epoch > 0) restore_snapshot(store, best);
  store.zero_grad();
  return report;
}

}  // namespace nasvad::nn
