#include "sgnn/harness/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include "sgnn/bounds/bounds.hpp"
#include "sgnn/bounds/estimators.hpp"
#include "sgnn/graphcore/graph.hpp"
#include "sgnn/graphcore/spectral.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/polybasis/basis.hpp"
#include "sgnn/specnet/linalg.hpp"
#include "sgnn/specnet/network.hpp"

namespace sgnn {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                              double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Graph random_graph(std::size_t n, double p, int classes, int dim, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j});
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(classes));
  return make_graph(n, std::move(edges), normal_matrix(static_cast<Eigen::Index>(n), dim, rng),
                    std::move(labels));
}

// P_0(A) .. P_K(A) from the matrix form of each basis definition.
std::vector<Eigen::MatrixXd> spatial_basis(Basis basis, int order, const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  std::vector<Eigen::MatrixXd> p;
  switch (basis.kind) {
    case BasisKind::Monomial:
      p.push_back(id);
      for (int k = 1; k <= order; ++k) p.push_back(p.back() * a);
      break;
    case BasisKind::Chebyshev:
      p.push_back(id);
      if (order >= 1) p.push_back(a);
      for (int k = 2; k <= order; ++k) p.push_back(2.0 * a * p[k - 1] - p[k - 2]);
      break;
    case BasisKind::Legendre:
      p.push_back(id);
      if (order >= 1) p.push_back(a);
      for (int k = 1; k < order; ++k) {
        p.push_back(((2.0 * k + 1.0) * a * p[k] - k * p[k - 1]) / (k + 1.0));
      }
      break;
    case BasisKind::Bernstein: {
      const Eigen::MatrixXd up = (id + a) / 2.0;
      const Eigen::MatrixXd down = (id - a) / 2.0;
      std::vector<Eigen::MatrixXd> up_pow{id}, down_pow{id};
      for (int k = 1; k <= order; ++k) {
        up_pow.push_back(up_pow.back() * up);
        down_pow.push_back(down_pow.back() * down);
      }
      double binom = 1.0;
      for (int k = 0; k <= order; ++k) {
        p.push_back(binom * up_pow[k] * down_pow[order - k]);
        binom = binom * (order - k) / (k + 1.0);
      }
      break;
    }
  }
  if (basis.rescaled) {
    const double s = peak_amplification(basis.kind, order);
    for (auto& m : p) m /= s;
  }
  return p;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

CheckResult check_amplification_profiles(int max_order) {
  CheckResult r{"amplification_profiles", true, 0.0, ""};
  const std::vector<double> grid = uniform_grid();
  const double ends[] = {-1.0, 1.0};
  for (BasisKind kind : kAllBases) {
    for (int k = 0; k <= max_order; ++k) {
      const Basis plain{kind, false};
      const double expected = kind == BasisKind::Bernstein ? 1.0 : k + 1.0;
      const std::vector<double> at_ends = amplification_profile(plain, k, ends);
      const std::vector<double> prof = amplification_profile(plain, k, grid);
      const double grid_max = *std::max_element(prof.begin(), prof.end());
      for (double e : at_ends) r.worst = std::max(r.worst, std::abs(e - expected));
      r.worst = std::max(r.worst, std::max(0.0, grid_max - expected));
      const std::vector<double> scaled = amplification_profile({kind, true}, k, grid);
      r.worst = std::max(r.worst, std::abs(*std::max_element(scaled.begin(), scaled.end()) - 1.0));
      if (kind == BasisKind::Bernstein) {
        for (double x : grid) r.worst = std::max(r.worst, std::abs(eval_basis(plain, k, x).sum() - 1.0));
      }
    }
  }
  const double mid[] = {0.0};
  const double cheb0 = amplification_profile({BasisKind::Chebyshev, false}, 10, mid)[0] / 11.0;
  const double cheb_err = std::abs(cheb0 - 6.0 / 11.0);
  r.passed = r.worst <= 1e-10 && cheb_err <= 1e-12;
  r.worst = std::max(r.worst, cheb_err);
  r.detail = "chebyshev_k10_mid=" + sci(cheb0);
  return r;
}

CheckResult check_eigendecomposition(int graphs, int max_n, std::uint64_t seed) {
  CheckResult r{"eigendecomposition", true, 0.0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, std::max(2, max_n));
  std::uniform_real_distribution<double> density(0.01, 0.3);
  bool repeatable = true;
  for (int g = 0; g < graphs; ++g) {
    const Graph graph = random_graph(static_cast<std::size_t>(size(rng)), density(rng), 2, 1, rng);
    const Eigen::MatrixXd a = build_normalized_adjacency(graph);
    const SpectralDecomposition d = eigendecompose(a);
    r.worst = std::max({r.worst, d.residual, d.orthogonality});
    if (g == 0) {
      const SpectralDecomposition again = eigendecompose(a);
      repeatable = again.eigenvalues == d.eigenvalues && again.eigenvectors == d.eigenvectors;
    }
  }
  const Graph path = make_graph(3, {{0, 1}, {1, 2}}, Eigen::MatrixXd::Zero(3, 1), {0, 0, 0});
  const SpectralDecomposition pd = eigendecompose(build_normalized_adjacency(path));
  const double path_err = (pd.eigenvalues - Eigen::Vector3d(-1.0, 0.0, 1.0)).cwiseAbs().maxCoeff();
  r.passed = r.worst <= kEigenTolerance && path_err <= 1e-10 && repeatable;
  r.detail = "path_error=" + sci(path_err) + " repeatable=" + (repeatable ? "1" : "0");
  return r;
}

CheckResult check_gradients(int seeds, int nodes, std::uint64_t seed) {
  CheckResult r{"gradients", true, 0.0, ""};
  constexpr double h = 1e-5;
  std::size_t checked = 0;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
    const Graph graph = random_graph(static_cast<std::size_t>(nodes), 0.25, 3, 5, rng);
    const SpectralDecomposition decomp = eigendecompose(build_normalized_adjacency(graph));
    std::vector<std::size_t> train_nodes;
    for (std::size_t i = 0; i < graph.n; i += 2) train_nodes.push_back(i);

    for (int variant = 0; variant < 2; ++variant) {
      ModelConfig cfg;
      cfg.input_dim = 5;
      cfg.hidden = 6;
      cfg.classes = 3;
      cfg.order = 3;
      cfg.basis = Basis{kAllBases[(s + variant) % 4], variant == 1};
      if (variant == 0) {
        // Penalty on the raw features is a constant signal, so the full
        // objective (including R_EW) is differentiable in every parameter.
        cfg.filter_layers = 2;
        cfg.activation = Activation::Relu;
        cfg.dropout1 = 0.3;
        cfg.dropout2 = 0.2;
        cfg.lambda_ew = 0.7;
        cfg.reg_target = RegTarget::RawFeatures;
      } else {
        cfg.filter_layers = 1;
        cfg.activation = Activation::Identity;
      }
      const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, decomp.eigenvalues);
      // Central differences are only valid away from relu kinks: redraw until
      // every relu input is at least kKinkMargin from zero.
      constexpr double kKinkMargin = 1e-3;
      ModelParams params;
      std::uint64_t dropout_seed = 0;
      for (int attempt = 0;; ++attempt) {
        params = init_model(cfg, seed * 31 + static_cast<std::uint64_t>(s) +
                                     1000003ULL * static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> noise(-0.5, 0.5);
        for (auto& th : params.weights.thetas)
          for (Eigen::Index k = 0; k < th.size(); ++k) th[k] += noise(rng);
        dropout_seed = rng();
        std::mt19937_64 drop(dropout_seed);
        const ForwardPass fp = forward(params, decomp, vp, graph.features, Mode::Train, &drop);
        double margin = fp.pre_hidden.cwiseAbs().minCoeff();
        if (cfg.activation == Activation::Relu)
          for (const FilterLayerTape& l : fp.layers)
            margin = std::min(margin, l.pre_activation.cwiseAbs().minCoeff());
        if (margin >= kKinkMargin) break;
        if (attempt == 200) throw std::runtime_error("no kink-free parameter draw found");
      }
      auto loss_at = [&](const ModelParams& p) {
        std::mt19937_64 drop(dropout_seed);
        return loss_and_grads(p, decomp, vp, graph.features, graph.labels, train_nodes,
                              Mode::Train, &drop);
      };
      const LossAndGrads base = loss_at(params);
      const auto analytic = base.grads.views();
      auto views = params.weights.views();
      for (std::size_t t = 0; t < views.size(); ++t) {
        for (std::size_t i = 0; i < views[t].size(); ++i) {
          const double orig = views[t][i];
          views[t][i] = orig + h;
          const double up = loss_at(params).loss;
          views[t][i] = orig - h;
          const double down = loss_at(params).loss;
          views[t][i] = orig;
          const double fd = (up - down) / (2.0 * h);
          const double a = analytic[t][i];
          const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6});
          r.worst = std::max(r.worst, rel);
          ++checked;
        }
      }
    }
  }
  r.passed = r.worst <= 1e-4;
  r.detail = "entries=" + std::to_string(checked);
  return r;
}

CheckResult check_filter_equivalence(int max_order, int nodes, std::uint64_t seed) {
  CheckResult r{"filter_equivalence", true, 0.0, ""};
  std::mt19937_64 rng(seed);
  const Graph graph = random_graph(static_cast<std::size_t>(nodes), 0.2, 2, 4, rng);
  const Eigen::MatrixXd a = build_normalized_adjacency(graph);
  const SpectralDecomposition d = eigendecompose(a);
  const Eigen::MatrixXd& u = d.eigenvectors;
  const Eigen::MatrixXd h = graph.features;
  const Eigen::MatrixXd w = normal_matrix(h.cols(), 3, rng);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  int cases = 0;
  for (BasisKind kind : kAllBases) {
    for (bool rescaled : {false, true}) {
      const Basis basis{kind, rescaled};
      for (int k = 1; k <= max_order; ++k) {
        Eigen::VectorXd theta(k + 1);
        for (int i = 0; i <= k; ++i) theta[i] = coef(rng);
        const std::vector<Eigen::MatrixXd> p = spatial_basis(basis, k, a);
        Eigen::MatrixXd spatial = Eigen::MatrixXd::Zero(a.rows(), a.cols());
        for (int i = 0; i <= k; ++i) spatial += theta[i] * p[i];
        const Eigen::MatrixXd lhs = spatial * h * w;
        const BasisMatrix vp = vandermonde(basis, k, d.eigenvalues);
        const Eigen::MatrixXd rhs = u * (vp.response(theta).asDiagonal() * (u.transpose() * h)) * w;
        r.worst = std::max(r.worst, max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs)));
        ++cases;
      }
    }
  }
  r.passed = r.worst <= 1e-8;
  r.detail = "cases=" + std::to_string(cases);
  return r;
}

CheckResult check_ftgc_invariance(int samples, int nodes, std::uint64_t seed) {
  CheckResult r{"ftgc_invariance", true, 0.0, ""};
  std::mt19937_64 rng(seed);
  const Graph graph = random_graph(static_cast<std::size_t>(nodes), 0.15, 2, 1, rng);
  const SpectralDecomposition d = eigendecompose(build_normalized_adjacency(graph));
  const BasisMatrix vp = vandermonde({BasisKind::Chebyshev, false}, 4, d.eigenvalues);
  const Eigen::MatrixXd x = normal_matrix(graph.n, 1, rng);
  Eigen::MatrixXd functions(graph.n, 16);
  for (int j = 0; j < 16; ++j) {
    const Eigen::VectorXd theta = normal_matrix(5, 1, rng);
    functions.col(j) = d.eigenvectors * (vp.response(theta).asDiagonal() * (d.eigenvectors.transpose() * x));
  }
  const Eigen::MatrixXd fourier = gft(d, functions, GftDirection::Forward);
  const MonteCarloEstimate vertex = ftgc_monte_carlo(functions, samples, seed ^ 0x1111);
  const MonteCarloEstimate spectral = ftgc_monte_carlo(fourier, samples, seed ^ 0x2222);
  const double se = std::hypot(vertex.std_error, spectral.std_error);
  r.worst = std::abs(vertex.estimate - spectral.estimate) / se;
  r.passed = r.worst <= 3.0;
  r.detail = "vertex=" + sci(vertex.estimate) + " fourier=" + sci(spectral.estimate) +
             " combined_se=" + sci(se);
  return r;
}

CheckResult check_relu_lipschitz(int pairs, std::uint64_t seed) {
  CheckResult r{"relu_lipschitz", true, 0.0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_scale(-6.0, 3.0);
  int violations = 0;
  double worst_slack = INFINITY;
  for (int p = 0; p < pairs; ++p) {
    const double s = std::pow(10.0, log_scale(rng));
    const Eigen::MatrixXd x = normal_matrix(8, 4, rng, s);
    const Eigen::MatrixXd y = x + normal_matrix(8, 4, rng, s * std::pow(10.0, log_scale(rng) / 3.0));
    const double slack = (x - y).norm() - (x.cwiseMax(0.0) - y.cwiseMax(0.0)).norm();
    worst_slack = std::min(worst_slack, slack);
    if (slack < -1e-12) ++violations;
  }
  r.worst = static_cast<double>(violations);
  r.passed = violations == 0;
  r.detail = "pairs=" + std::to_string(pairs) + " min_slack=" + sci(worst_slack);
  return r;
}

CheckResult check_jacobian(int models, int nodes, std::uint64_t seed) {
  CheckResult r{"jacobian", true, 0.0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int m = 0; m < models; ++m) {
    const Graph graph = random_graph(static_cast<std::size_t>(nodes), 0.2, 2, 4, rng);
    const SpectralDecomposition d = eigendecompose(build_normalized_adjacency(graph));
    ModelConfig cfg;
    cfg.input_dim = 4;
    cfg.hidden = 5;
    cfg.classes = 2;
    cfg.order = 1 + m % 6;
    cfg.basis = Basis{kAllBases[m % 4], m % 3 == 0};
    cfg.filter_layers = 1 + m % 3;
    cfg.activation = Activation::Relu;
    ModelParams params = init_model(cfg, rng());
    for (auto& th : params.weights.thetas)
      for (Eigen::Index k = 0; k < th.size(); ++k) th[k] = coef(rng);
    const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, d.eigenvalues);
    BoundInputs in;
    in.set_basis(vp);
    for (int l = 0; l < cfg.filter_layers; ++l) {
      in.c_w.push_back(spectral_norm(params.weights.w_mid[l]));
      in.c_theta.push_back(params.weights.thetas[l].norm());
    }
    const double bound = jacobian_norm_bound(in);
    const PowerIterationResult pi = true_jacobian_norm(params, d, vp, graph.features);
    worst_ratio = std::max(worst_ratio, pi.norm / bound);
    if (pi.norm > bound) ++violations;
  }

  // One identity layer: J = (U diag(V theta) U^T) kron W^T, so ||J|| = ||W|| max|V theta|.
  double closed_err = 0.0;
  for (int m = 0; m < std::max(1, models / 2); ++m) {
    const Graph graph = random_graph(static_cast<std::size_t>(nodes), 0.2, 2, 4, rng);
    const SpectralDecomposition d = eigendecompose(build_normalized_adjacency(graph));
    ModelConfig cfg;
    cfg.input_dim = 4;
    cfg.hidden = 5;
    cfg.classes = 2;
    cfg.order = 2 + m % 8;
    cfg.basis = Basis{kAllBases[m % 4], false};
    cfg.activation = Activation::Identity;
    ModelParams params = init_model(cfg, rng());
    for (Eigen::Index k = 0; k < params.weights.thetas[0].size(); ++k) {
      params.weights.thetas[0][k] = coef(rng);
    }
    const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, d.eigenvalues);
    const double closed = spectral_norm(params.weights.w_mid[0], 1e-15, 100000) *
                          vp.response(params.weights.thetas[0]).cwiseAbs().maxCoeff();
    const PowerIterationResult pi = true_jacobian_norm(params, d, vp, graph.features, 1e-15, 100000);
    closed_err = std::max(closed_err, std::abs(pi.norm - closed) / closed);
  }
  r.worst = closed_err;
  r.passed = violations == 0 && closed_err <= 1e-6;
  r.detail = "violations=" + std::to_string(violations) + " max_ratio=" + sci(worst_ratio);
  return r;
}

CheckResult check_bound_ordering(int configs, std::uint64_t seed) {
  CheckResult r{"bound_ordering", true, 0.0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(5, 200), depth(1, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  for (int c = 0; c < configs; ++c) {
    BoundInputs in;
    in.n = static_cast<std::size_t>(size(rng));
    in.m = 1;
    const double spread = 1.0 + 4.0 * unit(rng);
    in.row_norms.resize(static_cast<Eigen::Index>(in.n));
    in.energy.resize(static_cast<Eigen::Index>(in.n));
    for (std::size_t i = 0; i < in.n; ++i) {
      in.row_norms[static_cast<Eigen::Index>(i)] = 0.05 + spread * unit(rng);
      in.energy[static_cast<Eigen::Index>(i)] = unit(rng) * unit(rng) * 10.0;
    }
    in.two_inf_norm = in.row_norms.maxCoeff();
    const int layers = depth(rng);
    for (int l = 0; l < layers; ++l) {
      in.c_w.push_back(0.1 + 3.0 * unit(rng));
      in.c_theta.push_back(0.1 + 3.0 * unit(rng));
    }
    const double lin = ftgc_linear_bound(in);
    const double scaled = ftgc_nonlinear_bound(in).value / std::sqrt(static_cast<double>(in.n));
    r.worst = std::max(r.worst, lin / scaled);
    if (lin > scaled * (1.0 + 1e-12)) ++violations;
  }
  r.passed = violations == 0;
  r.detail = "configs=" + std::to_string(configs) + " violations=" + std::to_string(violations);
  return r;
}

CheckResult check_splits(std::uint64_t seed) {
  CheckResult r{"splits", true, 0.0, ""};
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 50; ++i) labels.push_back(c);
  const Split a = make_split(labels, 10, 0.35, seed);
  const Split b = make_split(labels, 10, 0.35, seed);
  bool ok = a.train_idx.size() == 30 && a.val_idx.size() == 42 && a.test_idx.size() == 78;
  ok = ok && a.train_idx == b.train_idx && a.val_idx == b.val_idx && a.test_idx == b.test_idx;
  std::set<std::size_t> all;
  for (const auto* part : {&a.train_idx, &a.val_idx, &a.test_idx}) all.insert(part->begin(), part->end());
  ok = ok && all.size() == labels.size();
  std::vector<int> per_class(3, 0);
  for (std::size_t i : a.train_idx) ++per_class[static_cast<std::size_t>(labels[i])];
  ok = ok && std::all_of(per_class.begin(), per_class.end(), [](int c) { return c == 10; });
  r.passed = ok;
  r.detail = "sizes=" + std::to_string(a.train_idx.size()) + "/" + std::to_string(a.val_idx.size()) +
             "/" + std::to_string(a.test_idx.size());
  return r;
}

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  return {
      check_amplification_profiles(20),
      check_eigendecomposition(20, 60, seed ^ 0x01),
      check_gradients(2, 12, seed ^ 0x02),
      check_filter_equivalence(10, 20, seed ^ 0x03),
      check_ftgc_invariance(2000, 20, seed ^ 0x04),
      check_relu_lipschitz(2000, seed ^ 0x05),
      check_jacobian(6, 20, seed ^ 0x06),
      check_bound_ordering(200, seed ^ 0x07),
      check_splits(seed ^ 0x08),
  };
}

std::string format_check(const CheckResult& c) {
  return std::string(c.passed ? "PASS " : "FAIL ") + c.name + " worst=" + sci(c.worst) +
         (c.detail.empty() ? "" : " " + c.detail);
}

}  // namespace sgnn
