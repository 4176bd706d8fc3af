#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgnn/graphcore/dataset.hpp"
#include "sgnn/harness/stats.hpp"
#include "sgnn/specnet/train.hpp"

namespace sgnn {

/// One point of the hyperparameter search space (filter order is fixed).
struct HyperParams {
  double lr = 0.01;
  double weight_decay = 1e-5;
  int hidden = 16;
  double dropout1 = 0.0;
  double dropout2 = 0.0;
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

std::string to_string(const HyperParams& hp);

struct HyperGrid {
  std::vector<double> lr{0.0005, 0.001, 0.005, 0.01, 0.05, 0.1};
  std::vector<double> weight_decay{0.0, 1e-6, 5e-6, 1e-5, 5e-5, 1e-4, 5e-4, 1e-3};
  std::vector<int> hidden{8, 16, 32, 64, 128};
  std::vector<double> dropout1{0.0, 0.2, 0.4, 0.6, 0.8};
  std::vector<double> dropout2{0.0, 0.2, 0.4, 0.6, 0.8};

  /// `count` distinct points drawn uniformly without replacement.
  std::vector<HyperParams> sample(int count, std::uint64_t seed) const;
  std::size_t size() const;
};

inline const std::vector<double> kDefaultLambdaGrid{0.001, 0.005, 0.01, 0.05, 0.1,
                                                   0.5,   1.0,   5.0,  10.0};

struct AblationSpec {
  const Dataset* dataset = nullptr;
  std::vector<Basis> bases;
  int seeds = 10;
  std::uint64_t base_seed = 0;
  ModelConfig model;  // basis and lambda_ew are overridden
  TrainConfig train;  // max_epochs / patience; lr and weight decay come from the search
  HyperParams defaults;
  HyperGrid grid;
  /// Random grid points evaluated in addition to `defaults`. 0 searches lambda only.
  int trials = 0;
  std::vector<double> lambda_grid = kDefaultLambdaGrid;
  int per_class = 10;
  double val_frac = 0.35;
  int jobs = 1;
};

/// Per-split outcome of one (basis, hyperparameters, lambda) candidate.
struct CandidateRuns {
  HyperParams hp;
  double lambda_ew = 0.0;
  std::vector<double> val_acc, val_loss, test_acc, gap;
  std::size_t failures = 0;
  double mean_val_acc() const;
  double mean_val_loss() const;
};

struct AblationRow {
  std::string dataset;
  Basis basis;
  HyperParams base_hp;
  HyperParams reg_hp;
  double reg_lambda = 0.0;
  std::vector<double> base_acc, reg_acc, base_gap, reg_gap;  // per split
  MeanCi base_acc_ci, reg_acc_ci, base_gap_ci, reg_gap_ci;
  PairedTest acc_test;  // reg vs base
  PairedTest gap_test;
  std::size_t candidates = 0;
};

/// For each basis: the best lambda = 0 model and the best model over
/// lambda_grid, both chosen by mean validation accuracy across splits (lower
/// mean validation loss breaks ties), compared split by split on test
/// accuracy and loss gap. Splits are shared by every candidate.
std::vector<AblationRow> run_ablation(const AblationSpec& spec);

std::string ablation_csv_header();
/// One line per (basis, split).
std::vector<std::string> ablation_csv_rows(const AblationRow& row);

}  // namespace sgnn
