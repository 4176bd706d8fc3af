#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgnn/bounds/report.hpp"
#include "sgnn/graphcore/dataset.hpp"
#include "sgnn/harness/stats.hpp"
#include "sgnn/specnet/train.hpp"

namespace sgnn {

struct SweepSpec {
  std::vector<const Dataset*> datasets;
  std::vector<Basis> bases;
  std::vector<int> orders;
  std::vector<int> layers;
  int seeds = 10;
  std::uint64_t base_seed = 0;
  ModelConfig model;  // basis / order / filter_layers are overridden per row
  TrainConfig train;
  BoundOptions bounds;
  int per_class = 10;
  double val_frac = 0.35;
  int jobs = 1;

  std::size_t row_count() const {
    return datasets.size() * bases.size() * orders.size() * layers.size() *
           static_cast<std::size_t>(seeds);
  }
};

struct SweepRow {
  std::string dataset;
  std::size_t nodes = 0;
  Basis basis;
  int order = 0;
  int layers = 0;
  int seed_index = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t init_seed = 0;
  std::string status = "ok";  // "ok" or "error: <message>"

  double train_loss = 0.0, val_loss = 0.0, test_loss = 0.0;
  double train_acc = 0.0, val_acc = 0.0, test_acc = 0.0;
  double gap = 0.0;
  int epochs_run = 0;
  MeasuredNorms norms;

  double ftgc_nonlinear = 0.0;
  double ftgc_linear = 0.0;
  double weight_term = 0.0;
  double spectral_term = 0.0;
  double gap_bound = 0.0;
  double jacobian_bound = 0.0;
  double true_jacobian = 0.0;
  bool jacobian_converged = false;
  int jacobian_iterations = 0;
  double wrapper_prefactor = 0.0;

  bool ok() const { return status == "ok"; }
};

/// One training run + bound report per (dataset, basis, order, layers, seed).
/// Split and initialisation seeds depend only on (base_seed, seed index), so
/// rows sharing a seed index share their split across bases and orders.
/// Rows are passed to `on_row` in enumeration order as they complete.
std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row = {});

SweepRow run_sweep_row(const SweepSpec& spec, std::size_t index);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

struct SweepSummary {
  std::size_t rows_ok = 0;
  std::size_t rows_failed = 0;
  std::size_t jacobian_violations = 0;   // true_jacobian > jacobian_bound
  std::size_t ordering_violations = 0;   // ftgc_linear > ftgc_nonlinear(alpha=1)/sqrt(n)
  double max_decomposition_error = 0.0;  // |weight*spectral - ftgc| / ftgc
  std::optional<CorrelationReport> gap_vs_ftgc_nonlinear;
  std::optional<CorrelationReport> gap_vs_ftgc_linear;
  std::optional<CorrelationReport> gap_vs_jacobian_bound;
  std::optional<CorrelationReport> gap_vs_weight_term;
  std::optional<CorrelationReport> gap_vs_spectral_term;
};

SweepSummary summarize_sweep(const std::vector<SweepRow>& rows);

}  // namespace sgnn
