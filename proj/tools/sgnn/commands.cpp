#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "sgnn/bounds/report.hpp"
#include "sgnn/format.hpp"
#include "sgnn/harness/ablation.hpp"
#include "sgnn/harness/selftest.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/harness/sweep.hpp"
#include "sgnn/harness/text.hpp"
#include "sgnn/specnet/checkpoint.hpp"
#include "sgnn/specnet/network.hpp"
#include "sgnn/specnet/train.hpp"

namespace sgnn::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

ModelConfig model_config(const Settings& s, Basis basis) {
  ModelConfig c;
  c.basis = basis;
  c.order = s.integer("order");
  c.filter_layers = s.integer("layers");
  c.hidden = s.integer("hidden");
  c.dropout1 = s.real("dropout1");
  c.dropout2 = s.real("dropout2");
  c.lambda_ew = s.real("lambda-ew");
  c.clip_logits = s.flag("clip-logits");
  c.logit_bound = s.real("logit-bound");
  c.seed = s.u64("seed");
  try {
    c.activation = parse_activation(s.str("activation"));
    c.reg_target = parse_reg_target(s.str("reg-target"));
    ModelConfig probe = c;
    probe.input_dim = 1;
    probe.classes = 2;
    probe.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

Basis single_basis(const Settings& s) {
  const std::vector<Basis> bases = parse_bases(s.str("basis"), s.flag("rescaled"));
  if (bases.size() != 1) throw UsageError("--basis: " + s.command() + " takes exactly one basis");
  return bases.front();
}

TrainConfig train_config(const Settings& s) {
  TrainConfig t;
  t.lr = s.real("lr");
  t.weight_decay = s.real("weight-decay");
  t.max_epochs = s.integer("epochs");
  t.patience = s.integer("patience");
  if (!(t.lr > 0.0) || t.weight_decay < 0.0 || t.max_epochs < 1 || t.patience < 1) {
    throw UsageError("training settings out of range (lr > 0, weight-decay >= 0, epochs/patience >= 1)");
  }
  if (s.integer("per-class") < 1) throw UsageError("--per-class must be >= 1");
  const double vf = s.real("val-frac");
  if (!(vf >= 0.0 && vf <= 1.0)) throw UsageError("--val-frac must be in [0, 1]");
  return t;
}

BoundOptions bound_options(const Settings& s) {
  BoundOptions b;
  b.delta = s.real("delta");
  b.c1 = s.real("c1");
  b.c2 = s.real("c2");
  b.jacobian_tol = s.real("jacobian-tol");
  b.jacobian_max_iter = s.integer("jacobian-max-iter");
  if (!(b.delta > 0.0 && b.delta <= 1.0)) throw UsageError("--delta must be in (0, 1]");
  if (!(b.jacobian_tol > 0.0) || b.jacobian_max_iter < 1) {
    throw UsageError("--jacobian-tol must be > 0 and --jacobian-max-iter >= 1");
  }
  return b;
}

int jobs(const Settings& s) {
  const int j = s.integer("jobs");
  if (j < 1) throw UsageError("--jobs must be >= 1");
  return j;
}

int seeds(const Settings& s) {
  const int n = s.integer("seeds");
  if (n < 1) throw UsageError("--seeds must be >= 1");
  return n;
}

void begin_output(const OutDir& out, const Settings& s) {
  if (!out) return;
  fs::create_directories(*out);
  std::vector<std::pair<std::string, std::string>> entries{{"command", s.command()}};
  for (auto& kv : s.resolved()) entries.push_back(kv);
  write_manifest(*out, entries);
}

void write_file(const OutDir& out, const std::string& name, const std::string& content) {
  if (!out) return;
  std::ofstream f(*out / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (*out / name).string());
  f << content;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json correlation_json(const std::optional<CorrelationReport>& c) {
  if (!c) return nullptr;
  return json{{"pearson_r", c->pearson_r},
              {"spearman_rho", c->spearman_rho},
              {"fisher_ci_95", {c->fisher_ci_low, c->fisher_ci_high}},
              {"spearman_ci_95", {c->spearman_ci_low, c->spearman_ci_high}},
              {"n_points", c->n_points}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Prepared {
  Dataset data;
  Split split;
  std::uint64_t init_seed = 0;
};

Prepared prepare(const Settings& s) {
  Prepared p;
  p.data = resolve_dataset(s);
  const std::uint64_t seed = s.u64("seed");
  p.split = make_split(p.data.graph.labels, s.integer("per-class"), s.real("val-frac"),
                       derive_seed(seed, 0, 1));
  p.init_seed = derive_seed(seed, 0, 2);
  return p;
}

std::string metrics_text(const TrainResult& r) {
  std::ostringstream ss;
  ss << "train_loss=" << format_double(r.train_loss) << '\n'
     << "val_loss=" << format_double(r.val_loss) << '\n'
     << "test_loss=" << format_double(r.test_loss) << '\n'
     << "train_acc=" << format_double(r.train_acc) << '\n'
     << "val_acc=" << format_double(r.val_acc) << '\n'
     << "test_acc=" << format_double(r.test_acc) << '\n'
     << "gap=" << format_double(r.gap) << '\n'
     << "epochs_run=" << r.epochs_run << '\n'
     << "best_epoch=" << r.best_epoch << '\n';
  return ss.str();
}

}  // namespace

int run_profile(const Settings& s, const OutDir& out) {
  const std::vector<Basis> bases = parse_bases(s.str("basis"), s.flag("rescaled"));
  const int order = s.integer("order");
  const int points = s.integer("points");
  if (order < 0) throw UsageError("--order must be >= 0");
  if (points < 2) throw UsageError("--points must be >= 2");
  const std::vector<double> grid = uniform_grid(static_cast<std::size_t>(points));
  std::ostringstream ss;
  ss << "basis,rescaled,K,x,M,normalized\n";
  for (const Basis& b : bases) {
    const std::vector<double> m = amplification_profile(b, order, grid);
    const std::vector<double> norm = normalized_profile(b, order, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ss << to_string(b.kind) << ',' << (b.rescaled ? 1 : 0) << ',' << order << ','
         << format_double(grid[i]) << ',' << format_double(m[i]) << ',' << format_double(norm[i])
         << '\n';
    }
  }
  begin_output(out, s);
  write_file(out, "profile.csv", ss.str());
  std::cout << ss.str();
  return 0;
}

int run_bounds(const Settings& s, const OutDir& out) {
  const ModelConfig cfg = model_config(s, single_basis(s));
  const TrainConfig tc = train_config(s);
  const BoundOptions bo = bound_options(s);
  const int depth = s.integer("depth");
  if (depth < 0) throw UsageError("--depth must be >= 0");

  Prepared p = prepare(s);
  ModelParams params;
  std::string metrics;
  if (s.has("checkpoint")) {
    params = load_checkpoint(s.str("checkpoint"));
    if (params.config.input_dim != static_cast<int>(p.data.graph.feature_dim())) {
      throw std::runtime_error("checkpoint input dimension does not match the graph features");
    }
  } else {
    const TrainResult tr = train(cfg, tc, p.data, p.split, p.init_seed);
    params = tr.params;
    metrics = metrics_text(tr);
  }
  const BoundReport rep =
      compute_bound_report(params, p.data.decomp, p.data.graph.features, p.split.train_idx.size(), bo);
  std::string text = metrics + format_report(rep);
  begin_output(out, s);
  write_file(out, "bounds.txt", text);
  std::cout << text;

  if (depth > 0) {
    const Eigen::MatrixXd a = build_normalized_adjacency(p.data.graph);
    const double inf_norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    std::ostringstream ss;
    ss << "layers,ftgc_nonlinear,ftgc_linear,jacobian_bound,adjacency_inf_norm_pow\n";
    for (const DepthPoint& d : depth_curve(rep.inputs, depth, inf_norm)) {
      ss << d.layers << ',' << format_double(d.ftgc_nonlinear) << ',' << format_double(d.ftgc_linear)
         << ',' << format_double(d.jacobian_bound) << ',' << format_double(d.adjacency_inf_norm_pow)
         << '\n';
    }
    write_file(out, "depth.csv", ss.str());
    std::cout << ss.str();
  }
  return 0;
}

int run_train(const Settings& s, const OutDir& out) {
  const ModelConfig cfg = model_config(s, single_basis(s));
  const TrainConfig tc = train_config(s);
  Prepared p = prepare(s);
  const TrainResult tr = train(cfg, tc, p.data, p.split, p.init_seed);
  const std::string text = metrics_text(tr);
  begin_output(out, s);
  write_file(out, "results.txt", text);
  if (out) save_checkpoint(*out / "checkpoint.txt", tr.params);
  std::cout << text;
  return 0;
}

int run_sweep_command(const Settings& s, const OutDir& out) {
  SweepSpec spec;
  spec.bases = parse_bases(s.str("basis"), s.flag("rescaled"));
  spec.orders = parse_int_list(s.str("orders"), "orders");
  spec.layers = parse_int_list(s.str("layers"), "layers");
  spec.seeds = seeds(s);
  spec.base_seed = s.u64("seed");
  spec.model = model_config(s, spec.bases.front());
  for (int k : spec.orders)
    if (k < 0) throw UsageError("--orders must be >= 0");
  for (int l : spec.layers)
    if (l < 1) throw UsageError("--layers must be >= 1");
  spec.train = train_config(s);
  spec.bounds = bound_options(s);
  spec.per_class = s.integer("per-class");
  spec.val_frac = s.real("val-frac");
  spec.jobs = jobs(s);

  const Dataset data = resolve_dataset(s);
  spec.datasets = {&data};
  begin_output(out, s);
  std::ofstream csv;
  if (out) {
    csv.open(*out / "results.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write results.csv");
    csv << sweep_csv_header() << '\n';
  }
  const std::vector<SweepRow> rows = run_sweep(spec, [&](const SweepRow& r) {
    if (csv.is_open()) csv << sweep_csv_row(r) << '\n' << std::flush;
  });
  const SweepSummary sum = summarize_sweep(rows);

  double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  std::size_t unconverged = 0;
  for (const SweepRow& r : rows) {
    if (!r.ok() || !(r.true_jacobian > 0.0)) continue;
    const double ratio = r.jacobian_bound / r.true_jacobian;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    if (!r.jacobian_converged) ++unconverged;
  }
  json j{{"command", "sweep"},
         {"seed", spec.base_seed},
         {"rows", rows.size()},
         {"rows_ok", sum.rows_ok},
         {"rows_failed", sum.rows_failed},
         {"jacobian_violations", sum.jacobian_violations},
         {"jacobian_unconverged", unconverged},
         {"jacobian_tightness_ratio", {{"min", number(min_ratio)}, {"max", number(max_ratio)}}},
         {"ordering_violations", sum.ordering_violations},
         {"max_decomposition_error", sum.max_decomposition_error},
         {"correlations",
          {{"gap_vs_ftgc_nonlinear", correlation_json(sum.gap_vs_ftgc_nonlinear)},
           {"gap_vs_ftgc_linear", correlation_json(sum.gap_vs_ftgc_linear)},
           {"gap_vs_jacobian_bound", correlation_json(sum.gap_vs_jacobian_bound)},
           {"gap_vs_weight_term", correlation_json(sum.gap_vs_weight_term)},
           {"gap_vs_spectral_term", correlation_json(sum.gap_vs_spectral_term)}}}};
  write_file(out, "summary.json", dump(j));
  std::cout << dump(j);
  return sum.rows_failed == 0 ? 0 : 2;
}

int run_ablate(const Settings& s, const OutDir& out) {
  AblationSpec spec;
  spec.bases = parse_bases(s.str("basis"), s.flag("rescaled"));
  spec.seeds = seeds(s);
  if (spec.seeds < 2) throw UsageError("--seeds must be >= 2 for paired tests");
  spec.base_seed = s.u64("seed");
  spec.model = model_config(s, spec.bases.front());
  const TrainConfig tc = train_config(s);
  spec.train = tc;
  spec.defaults.lr = tc.lr;
  spec.defaults.weight_decay = tc.weight_decay;
  spec.defaults.hidden = spec.model.hidden;
  spec.defaults.dropout1 = spec.model.dropout1;
  spec.defaults.dropout2 = spec.model.dropout2;
  spec.trials = s.integer("trials");
  if (spec.trials < 0) throw UsageError("--trials must be >= 0");
  spec.lambda_grid = parse_real_list(s.str("lambdas"), "lambdas");
  for (double l : spec.lambda_grid)
    if (!(l >= 0.0)) throw UsageError("--lambdas must be >= 0");
  spec.per_class = s.integer("per-class");
  spec.val_frac = s.real("val-frac");
  spec.jobs = jobs(s);

  const Dataset data = resolve_dataset(s);
  spec.dataset = &data;
  const std::vector<AblationRow> rows = run_ablation(spec);

  std::ostringstream csv;
  csv << ablation_csv_header() << '\n';
  json table = json::array();
  std::ostringstream text;
  text << "basis       base_acc          reg_acc           d_acc          base_gap          "
          "reg_gap           d_gap          lambda\n";
  auto pm = [](const MeanCi& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f+-%.4f", c.mean, c.half_width);
    return std::string(buf);
  };
  for (const AblationRow& r : rows) {
    for (const std::string& line : ablation_csv_rows(r)) csv << line << '\n';
    auto side = [](const HyperParams& hp, const MeanCi& acc, const MeanCi& gap, double lambda) {
      return json{{"hyperparameters", to_string(hp)},
                  {"lambda_ew", lambda},
                  {"test_acc_mean", acc.mean},
                  {"test_acc_ci95", acc.half_width},
                  {"gap_mean", gap.mean},
                  {"gap_ci95", gap.half_width}};
    };
    auto delta = [](const PairedTest& t) {
      return json{{"delta", t.delta_mean}, {"t", number(t.t_stat)}, {"p", t.p_value},
                  {"stars", t.stars},      {"degenerate", t.degenerate},
                  {"test", "paired_t"}};
    };
    table.push_back({{"dataset", r.dataset},
                     {"basis", std::string(to_string(r.basis.kind))},
                     {"rescaled", r.basis.rescaled},
                     {"candidates", r.candidates},
                     {"base", side(r.base_hp, r.base_acc_ci, r.base_gap_ci, 0.0)},
                     {"reg", side(r.reg_hp, r.reg_acc_ci, r.reg_gap_ci, r.reg_lambda)},
                     {"delta_acc", delta(r.acc_test)},
                     {"delta_gap", delta(r.gap_test)}});
    char line[256];
    std::snprintf(line, sizeof line, "%-11s %-17s %-17s %+.4f%-4s %-17s %-17s %+.4f%-4s %s\n",
                  std::string(to_string(r.basis.kind)).c_str(), pm(r.base_acc_ci).c_str(),
                  pm(r.reg_acc_ci).c_str(), r.acc_test.delta_mean, r.acc_test.stars.c_str(),
                  pm(r.base_gap_ci).c_str(), pm(r.reg_gap_ci).c_str(), r.gap_test.delta_mean,
                  r.gap_test.stars.c_str(), format_double(r.reg_lambda).c_str());
    text << line;
  }
  const json j{{"command", "ablate"}, {"seed", spec.base_seed}, {"splits", spec.seeds},
               {"table", table}};
  begin_output(out, s);
  write_file(out, "results.csv", csv.str());
  write_file(out, "summary.json", dump(j));
  write_file(out, "table.txt", text.str());
  std::cout << text.str();
  return 0;
}

int run_jacobian(const Settings& s, const OutDir& out) {
  const ModelConfig cfg = model_config(s, single_basis(s));
  const TrainConfig tc = train_config(s);
  const BoundOptions bo = bound_options(s);
  const int n_seeds = seeds(s);
  const std::uint64_t seed = s.u64("seed");
  const Dataset data = resolve_dataset(s);
  const bool closed_form = cfg.activation == Activation::Identity && cfg.filter_layers == 1;

  std::ostringstream csv;
  csv << "seed_index,true_jacobian,jacobian_bound,bound_over_true,converged,iterations,"
         "closed_form,closed_form_rel_error\n";
  std::size_t violations = 0;
  for (int i = 0; i < n_seeds; ++i) {
    const auto si = static_cast<std::uint64_t>(i);
    const Split split = make_split(data.graph.labels, s.integer("per-class"), s.real("val-frac"),
                                   derive_seed(seed, si, 1));
    const TrainResult tr = train(cfg, tc, data, split, derive_seed(seed, si, 2));
    const BoundReport rep = compute_bound_report(tr.params, data.decomp, data.graph.features,
                                                 split.train_idx.size(), bo);
    const PowerIterationResult& pi = *rep.true_jacobian;
    if (pi.norm > rep.jacobian_bound) ++violations;
    double closed = std::numeric_limits<double>::quiet_NaN();
    double rel = closed;
    if (closed_form) {
      const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, data.decomp.eigenvalues);
      closed = rep.inputs.c_w[0] * vp.response(tr.params.weights.thetas[0]).cwiseAbs().maxCoeff();
      rel = std::abs(pi.norm - closed) / closed;
    }
    csv << i << ',' << format_double(pi.norm) << ',' << format_double(rep.jacobian_bound) << ','
        << format_double(rep.jacobian_bound / pi.norm) << ',' << (pi.converged ? 1 : 0) << ','
        << pi.iterations << ',' << format_double(closed) << ',' << format_double(rel) << '\n';
  }
  begin_output(out, s);
  write_file(out, "results.csv", csv.str());
  std::cout << csv.str() << "violations=" << violations << '\n';
  return violations == 0 ? 0 : 2;
}

int run_selftest_command(const Settings& s, const OutDir& out) {
  const std::vector<CheckResult> checks = run_selftest(s.u64("seed"));
  std::ostringstream ss;
  bool ok = true;
  for (const CheckResult& c : checks) {
    ss << format_check(c) << '\n';
    ok = ok && c.passed;
  }
  begin_output(out, s);
  write_file(out, "selftest.txt", ss.str());
  std::cout << ss.str();
  return ok ? 0 : 2;
}

}  // namespace sgnn::cli
