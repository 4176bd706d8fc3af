#pragma once

#include <cstdint>
#include <vector>

#include "sgnn/graphcore/dataset.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/specnet/model.hpp"

namespace sgnn {

struct TrainConfig {
  double lr = 0.01;
  double weight_decay = 1e-5;
  int max_epochs = 500;
  int patience = 100;  // epochs without validation-accuracy improvement
};

struct MeasuredNorms {
  double w_in = 0.0;
  std::vector<double> w_mid;  // ||W^(l)||_2
  std::vector<double> theta;  // ||theta^(l)||_2
  double w_out = 0.0;
};

MeasuredNorms measure_norms(const ParamTensors& weights);

struct TrainResult {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double test_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double gap = 0.0;  // test_loss - train_loss
  int epochs_run = 0;
  int best_epoch = 0;
  MeasuredNorms measured_norms;
  ModelParams params;  // best-validation checkpoint
};

/// Full-batch training. The checkpoint with the highest validation accuracy
/// (lower validation loss on ties) is restored before the final evaluation.
/// Throws NonFiniteError carrying the epoch on divergence.
TrainResult train(const ModelConfig& config, const TrainConfig& train_config,
                  const Dataset& dataset, const Split& split, std::uint64_t seed);

struct Evaluation {
  double loss = 0.0;
  double acc = 0.0;
};

/// Eval-mode cross-entropy / accuracy of a model on one node subset.
Evaluation evaluate(const ModelParams& params, const Dataset& dataset, const BasisMatrix& vp,
                    std::span<const std::size_t> nodes);

}  // namespace sgnn
