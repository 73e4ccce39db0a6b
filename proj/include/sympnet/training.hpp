#pragma once

#include "sympnet/adam.hpp"
#include "sympnet/dataset.hpp"
#include "sympnet/fnn.hpp"
#include "sympnet/sympnet.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

namespace sympnet {

struct TrainConfig {
  int epochs = 100000;
  double lr = 0.1;
  std::uint64_t seed = 0;   // model initialization seed
  double w_penalty = 0.0;   // structure penalty weight, FNN only
  int log_every = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

struct LossRecord {
  int epoch = 0;
  double mse_d = 0.0;
  std::optional<double> mse_s;
};

template <typename Model>
struct TrainResult {
  Model model;       // lowest-loss parameters seen
  double best_loss;  // training loss of `model`
  int best_epoch;
  std::vector<LossRecord> history;
};

struct LossEval {
  double loss = 0.0;
  double mse_d = 0.0;
  std::optional<double> mse_s;
  Vector grads;
};

inline LossEval evaluate_loss(const SympNet& net, const Matrix& x, const Matrix& y, double) {
  auto r = backward(net, x, y);
  return {r.loss, r.loss, std::nullopt, r.grads.flat()};
}

inline LossEval evaluate_loss(const Fnn& net, const Matrix& x, const Matrix& y, double w) {
  auto r = fnn_backward(net, x, y, w);
  std::optional<double> mse_s;
  if (w > 0.0) mse_s = r.mse_s;
  return {r.loss, r.mse_d, mse_s, std::move(r.grads)};
}

/// Optional metric evaluated at logged epochs and stored as mse_s.
template <typename Model>
using StructureProbe = std::function<double(const Model&)>;

/// Full-batch Adam. Epoch e records the loss at the parameters after e
/// updates (epoch 0 is the initial model); records are kept at multiples of
/// log_every and at the last epoch.
template <typename Model>
TrainResult<Model> train(const Model& initial, const Dataset& data, const TrainConfig& cfg,
                         const StructureProbe<Model>& probe = {}) {
  cfg.validate();
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");

  Model model = initial;
  Vector params = model.parameters();
  AdamState adam(params.size(), cfg.lr);
  adam.beta1 = cfg.beta1;
  adam.beta2 = cfg.beta2;
  adam.eps = cfg.adam_eps;

  TrainResult<Model> result{model, std::numeric_limits<double>::infinity(), 0, {}};
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    LossEval eval = evaluate_loss(model, data.inputs, data.targets, cfg.w_penalty);
    if (!std::isfinite(eval.loss)) {
      throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch));
    }
    if (eval.loss < result.best_loss) {
      result.best_loss = eval.loss;
      result.best_epoch = epoch;
      result.model = model;
    }
    if (epoch % cfg.log_every == 0 || epoch == cfg.epochs) {
      LossRecord rec{epoch, eval.mse_d, eval.mse_s};
      if (probe) rec.mse_s = probe(model);
      result.history.push_back(rec);
    }
    if (epoch == cfg.epochs) break;
    adam_step(adam, params, eval.grads);
    model.set_parameters(params);
  }
  return result;
}

/// CSV with header "epoch,mse_d,mse_s"; mse_s is empty when not computed.
void write_loss_csv(std::ostream& out, const std::vector<LossRecord>& history);

}  // namespace sympnet
