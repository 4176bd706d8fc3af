#include "sgnn/harness/sweep.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sgnn/format.hpp"
#include "sgnn/harness/pool.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/harness/text.hpp"

namespace sgnn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_norms(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(format_double(x));
  return join(parts, ";");
}

std::optional<CorrelationReport> try_correlate(const std::vector<double>& x,
                                               const std::vector<double>& y) {
  try {
    return correlate(x, y);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

SweepRow run_sweep_row(const SweepSpec& spec, std::size_t index) {
  if (index >= spec.row_count()) throw std::out_of_range("sweep row index out of range");
  std::size_t rem = index;
  const auto seed_index = static_cast<int>(rem % static_cast<std::size_t>(spec.seeds));
  rem /= static_cast<std::size_t>(spec.seeds);
  const int layers = spec.layers[rem % spec.layers.size()];
  rem /= spec.layers.size();
  const int order = spec.orders[rem % spec.orders.size()];
  rem /= spec.orders.size();
  const Basis basis = spec.bases[rem % spec.bases.size()];
  rem /= spec.bases.size();
  const Dataset& data = *spec.datasets[rem];

  SweepRow row;
  row.dataset = data.name;
  row.nodes = data.graph.n;
  row.basis = basis;
  row.order = order;
  row.layers = layers;
  row.seed_index = seed_index;
  row.split_seed = derive_seed(spec.base_seed, static_cast<std::uint64_t>(seed_index), 1);
  row.init_seed = derive_seed(spec.base_seed, static_cast<std::uint64_t>(seed_index), 2);

  try {
    ModelConfig cfg = spec.model;
    cfg.basis = basis;
    cfg.order = order;
    cfg.filter_layers = layers;
    cfg.input_dim = static_cast<int>(data.graph.feature_dim());
    cfg.classes = data.graph.num_classes();

    const Split split =
        make_split(data.graph.labels, spec.per_class, spec.val_frac, row.split_seed);
    const TrainResult tr = train(cfg, spec.train, data, split, row.init_seed);
    row.train_loss = tr.train_loss;
    row.val_loss = tr.val_loss;
    row.test_loss = tr.test_loss;
    row.train_acc = tr.train_acc;
    row.val_acc = tr.val_acc;
    row.test_acc = tr.test_acc;
    row.gap = tr.gap;
    row.epochs_run = tr.epochs_run;
    row.norms = tr.measured_norms;

    const BoundReport rep = compute_bound_report(tr.params, data.decomp, data.graph.features,
                                                 split.train_idx.size(), spec.bounds);
    row.ftgc_nonlinear = rep.ftgc_nonlinear;
    row.ftgc_linear = rep.ftgc_linear;
    row.weight_term = rep.weight_term;
    row.spectral_term = rep.spectral_term;
    row.gap_bound = rep.gap.total();
    row.jacobian_bound = rep.jacobian_bound;
    row.wrapper_prefactor = rep.wrapper_prefactor;
    if (rep.true_jacobian) {
      row.true_jacobian = rep.true_jacobian->norm;
      row.jacobian_converged = rep.true_jacobian->converged;
      row.jacobian_iterations = rep.true_jacobian->iterations;
    } else {
      row.true_jacobian = kNaN;
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row) {
  if (spec.datasets.empty() || spec.bases.empty() || spec.orders.empty() ||
      spec.layers.empty() || spec.seeds < 1) {
    throw std::invalid_argument("sweep has an empty axis");
  }
  std::vector<SweepRow> rows;
  rows.reserve(spec.row_count());
  run_ordered<SweepRow>(
      spec.row_count(), spec.jobs, [&](std::size_t i) { return run_sweep_row(spec, i); },
      [&](std::size_t, SweepRow row) {
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      });
  return rows;
}

std::string sweep_csv_header() {
  return "dataset,basis,rescaled,K,L,seed_index,split_seed,init_seed,status,train_loss,val_loss,"
         "test_loss,train_acc,val_acc,test_acc,gap,epochs_run,norm_w_in,norm_w_mid,norm_theta,"
         "norm_w_out,ftgc_nonlinear,ftgc_linear,weight_term,spectral_term,gap_bound,"
         "jacobian_bound,true_jacobian,jacobian_converged,jacobian_iterations,wrapper_prefactor";
}

std::string sweep_csv_row(const SweepRow& r) {
  std::ostringstream ss;
  std::string status = r.status;
  for (char& c : status)
    if (c == ',' || c == '\n') c = ';';
  ss << r.dataset << ',' << to_string(r.basis.kind) << ',' << (r.basis.rescaled ? 1 : 0) << ','
     << r.order << ',' << r.layers << ',' << r.seed_index << ',' << r.split_seed << ','
     << r.init_seed << ',' << status << ',' << format_double(r.train_loss) << ','
     << format_double(r.val_loss) << ',' << format_double(r.test_loss) << ','
     << format_double(r.train_acc) << ',' << format_double(r.val_acc) << ','
     << format_double(r.test_acc) << ',' << format_double(r.gap) << ',' << r.epochs_run << ','
     << format_double(r.norms.w_in) << ',' << join_norms(r.norms.w_mid) << ','
     << join_norms(r.norms.theta) << ',' << format_double(r.norms.w_out) << ','
     << format_double(r.ftgc_nonlinear) << ',' << format_double(r.ftgc_linear) << ','
     << format_double(r.weight_term) << ',' << format_double(r.spectral_term) << ','
     << format_double(r.gap_bound) << ',' << format_double(r.jacobian_bound) << ','
     << format_double(r.true_jacobian) << ',' << (r.jacobian_converged ? 1 : 0) << ','
     << r.jacobian_iterations << ',' << format_double(r.wrapper_prefactor);
  return ss.str();
}

SweepSummary summarize_sweep(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  std::vector<double> gap, nl, lin, jac, wt, st;
  for (const SweepRow& r : rows) {
    if (!r.ok()) {
      ++s.rows_failed;
      continue;
    }
    ++s.rows_ok;
    if (r.true_jacobian > r.jacobian_bound) ++s.jacobian_violations;
    if (r.ftgc_linear > (1.0 + 1e-12) * r.ftgc_nonlinear / std::sqrt(static_cast<double>(r.nodes))) {
      ++s.ordering_violations;
    }
    if (r.ftgc_nonlinear > 0.0) {
      s.max_decomposition_error =
          std::max(s.max_decomposition_error,
                   std::abs(r.weight_term * r.spectral_term - r.ftgc_nonlinear) / r.ftgc_nonlinear);
    }
    gap.push_back(r.gap);
    nl.push_back(r.ftgc_nonlinear);
    lin.push_back(r.ftgc_linear);
    jac.push_back(r.jacobian_bound);
    wt.push_back(r.weight_term);
    st.push_back(r.spectral_term);
  }
  s.gap_vs_ftgc_nonlinear = try_correlate(nl, gap);
  s.gap_vs_ftgc_linear = try_correlate(lin, gap);
  s.gap_vs_jacobian_bound = try_correlate(jac, gap);
  s.gap_vs_weight_term = try_correlate(wt, gap);
  s.gap_vs_spectral_term = try_correlate(st, gap);
  return s;
}

}  // namespace sgnn
