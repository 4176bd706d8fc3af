#include "sgnn/specnet/train.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sgnn/errors.hpp"
#include "sgnn/specnet/linalg.hpp"
#include "sgnn/specnet/network.hpp"
#include "sgnn/specnet/optimizer.hpp"

namespace sgnn {

MeasuredNorms measure_norms(const ParamTensors& weights) {
  MeasuredNorms n;
  n.w_in = spectral_norm(weights.w_in);
  for (const auto& w : weights.w_mid) n.w_mid.push_back(spectral_norm(w));
  for (const auto& t : weights.thetas) n.theta.push_back(t.norm());
  n.w_out = spectral_norm(weights.w_out);
  return n;
}

Evaluation evaluate(const ModelParams& params, const Dataset& dataset, const BasisMatrix& vp,
                    std::span<const std::size_t> nodes) {
  const ForwardPass fp =
      forward(params, dataset.decomp, vp, dataset.graph.features, Mode::Eval);
  return {cross_entropy(fp.logits, dataset.graph.labels, nodes),
          accuracy(fp.logits, dataset.graph.labels, nodes)};
}

TrainResult train(const ModelConfig& config, const TrainConfig& train_config,
                  const Dataset& dataset, const Split& split, std::uint64_t seed) {
  const Graph& g = dataset.graph;
  if (split.train_idx.empty() || split.val_idx.empty() || split.test_idx.empty()) {
    throw std::invalid_argument("train/val/test sets must all be non-empty");
  }
  if (train_config.max_epochs < 1 || train_config.patience < 1) {
    throw std::invalid_argument("max_epochs and patience must be positive");
  }
  ModelConfig cfg = config;
  if (cfg.input_dim == 0) cfg.input_dim = static_cast<int>(g.feature_dim());
  if (cfg.classes == 0) cfg.classes = g.num_classes();

  const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, dataset.decomp.eigenvalues);
  ModelParams params = init_model(cfg, seed);
  std::mt19937_64 dropout_rng(seed ^ 0xd1b54a32d192ed03ULL);
  const bool has_dropout = cfg.dropout1 > 0.0 || cfg.dropout2 > 0.0;
  const AdamOptions adam{train_config.lr, train_config.weight_decay};

  ModelParams best = params;
  double best_acc = -1.0;
  double best_loss = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;

  // Iteration `step` computes the gradient at P_step; when dropout is off the
  // same pass also yields the eval-mode metrics of P_step (epoch = step).
  for (int step = 0;; ++step) {
    LossAndGrads lg;
    try {
      lg = loss_and_grads(params, dataset.decomp, vp, g.features, g.labels, split.train_idx,
                          Mode::Train, &dropout_rng);
    } catch (const NonFiniteError& e) {
      throw NonFiniteError(std::string(e.what()) + " at epoch " + std::to_string(step), e.layer(),
                           step);
    }

    if (step >= 1) {
      Evaluation val;
      if (has_dropout) {
        val = evaluate(params, dataset, vp, split.val_idx);
      } else {
        val = {cross_entropy(lg.pass.logits, g.labels, split.val_idx),
               accuracy(lg.pass.logits, g.labels, split.val_idx)};
      }
      if (!std::isfinite(val.loss)) {
        throw NonFiniteError("non-finite validation loss at epoch " + std::to_string(step), -1,
                             step);
      }
      if (val.acc > best_acc || (val.acc == best_acc && val.loss < best_loss)) {
        best_acc = val.acc;
        best_loss = val.loss;
        best_epoch = step;
        best = params;
      }
      epochs_run = step;
      if (step - best_epoch >= train_config.patience || step >= train_config.max_epochs) break;
    }
    adam_step(params, lg.grads, adam);
    if (!params.weights.all_finite()) {
      throw NonFiniteError("parameters diverged at epoch " + std::to_string(step + 1), -1,
                           step + 1);
    }
  }

  TrainResult r;
  const ForwardPass fp = forward(best, dataset.decomp, vp, g.features, Mode::Eval);
  r.train_loss = cross_entropy(fp.logits, g.labels, split.train_idx);
  r.val_loss = cross_entropy(fp.logits, g.labels, split.val_idx);
  r.test_loss = cross_entropy(fp.logits, g.labels, split.test_idx);
  r.train_acc = accuracy(fp.logits, g.labels, split.train_idx);
  r.val_acc = accuracy(fp.logits, g.labels, split.val_idx);
  r.test_acc = accuracy(fp.logits, g.labels, split.test_idx);
  r.gap = r.test_loss - r.train_loss;
  r.epochs_run = epochs_run;
  r.best_epoch = best_epoch;
  r.measured_norms = measure_norms(best.weights);
  r.params = std::move(best);
  return r;
}

}  // namespace sgnn
