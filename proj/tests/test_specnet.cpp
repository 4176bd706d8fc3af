#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "sgnn/errors.hpp"
#include "sgnn/graphcore/dataset.hpp"
#include "sgnn/harness/sbm.hpp"
#include "sgnn/harness/selftest.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/specnet/checkpoint.hpp"
#include "sgnn/specnet/jacobian.hpp"
#include "sgnn/specnet/linalg.hpp"
#include "sgnn/specnet/network.hpp"
#include "sgnn/specnet/optimizer.hpp"
#include "sgnn/specnet/train.hpp"
#include "support.hpp"

using namespace sgnn;

namespace {

ModelConfig small_config(BasisKind kind = BasisKind::Chebyshev, int order = 3) {
  ModelConfig c;
  c.input_dim = 3;
  c.hidden = 4;
  c.classes = 2;
  c.order = order;
  c.basis = {kind, false};
  return c;
}

struct Instance {
  Graph graph;
  SpectralDecomposition decomp;
};

Instance instance(std::uint64_t seed, std::size_t n = 20) {
  std::mt19937_64 rng(seed);
  Instance in{test::random_graph(n, 0.25, rng), {}};
  in.decomp = eigendecompose(build_normalized_adjacency(in.graph));
  return in;
}

std::vector<std::size_t> range(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

TEST_CASE("init_model is deterministic and bounded") {
  const ModelConfig cfg = small_config();
  const ModelParams a = init_model(cfg, 7);
  const ModelParams b = init_model(cfg, 7);
  CHECK(a.weights.w_in == b.weights.w_in);
  CHECK(a.weights.w_mid[0] == b.weights.w_mid[0]);
  CHECK(a.weights.w_out == b.weights.w_out);
  CHECK(init_model(cfg, 8).weights.w_in != a.weights.w_in);

  ModelConfig wide = small_config(BasisKind::Monomial);
  wide.input_dim = 100;
  const ModelParams w = init_model(wide, 1);
  CHECK(w.weights.w_in.cwiseAbs().maxCoeff() <= 0.1);
  CHECK(w.weights.thetas[0] == Eigen::Vector4d(0.0, 1.0, 0.0, 0.0));
  CHECK(w.adam.step == 0);

  ModelConfig k0 = small_config(BasisKind::Chebyshev, 0);
  const ModelParams z = init_model(k0, 3);
  CHECK(z.weights.thetas[0].size() == 1);
  CHECK(std::abs(z.weights.thetas[0][0]) <= 0.1);
}

TEST_CASE("model config validation") {
  ModelConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.dropout1 = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.lambda_ew = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.hidden = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(parse_activation("tanh"), std::invalid_argument);
  CHECK(parse_activation("relu") == Activation::Relu);
}

TEST_CASE("zero filter weights reduce the model to the MLP") {
  const Instance in = instance(1);
  ModelParams p = init_model(small_config(), 2);
  p.weights.w_mid[0].setZero();
  const BasisMatrix vp = vandermonde(p.config.basis, p.config.order, in.decomp.eigenvalues);
  const ForwardPass fp = forward(p, in.decomp, vp, in.graph.features, Mode::Eval);
  const Eigen::MatrixXd mlp =
      (in.graph.features * p.weights.w_in).cwiseMax(0.0) * p.weights.w_out;
  CHECK((fp.logits - mlp).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("constant filter on an edgeless graph") {
  const Graph g = make_graph(4, {}, Eigen::MatrixXd::Identity(4, 3), {0, 1, 0, 1});
  const SpectralDecomposition d = eigendecompose(build_normalized_adjacency(g));
  ModelParams p = init_model(small_config(BasisKind::Monomial), 5);
  p.weights.thetas[0] = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);
  const BasisMatrix vp = vandermonde(p.config.basis, p.config.order, d.eigenvalues);
  const ForwardPass fp = forward(p, d, vp, g.features, Mode::Eval);
  const Eigen::MatrixXd h = (g.features * p.weights.w_in).cwiseMax(0.0);
  const Eigen::MatrixXd expected = (h * p.weights.w_mid[0] + h) * p.weights.w_out;
  CHECK((fp.logits - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("forward rejects mismatched shapes") {
  const Instance in = instance(2);
  const ModelParams p = init_model(small_config(), 1);
  const BasisMatrix vp = vandermonde(p.config.basis, p.config.order, in.decomp.eigenvalues);
  CHECK_THROWS_AS(forward(p, in.decomp, vp, Eigen::MatrixXd::Zero(20, 5), Mode::Eval),
                  std::invalid_argument);
  const BasisMatrix wrong = vandermonde(p.config.basis, 2, in.decomp.eigenvalues);
  CHECK_THROWS_AS(forward(p, in.decomp, wrong, in.graph.features, Mode::Eval),
                  std::invalid_argument);
  ModelConfig drop = small_config();
  drop.dropout1 = 0.5;
  const ModelParams pd = init_model(drop, 1);
  CHECK_THROWS_AS(forward(pd, in.decomp, vp, in.graph.features, Mode::Train),
                  std::invalid_argument);
}

TEST_CASE("non-finite activations are reported with their layer") {
  const Instance in = instance(3);
  ModelParams p = init_model(small_config(), 1);
  p.weights.w_mid[0](0, 0) = std::numeric_limits<double>::infinity();
  const BasisMatrix vp = vandermonde(p.config.basis, p.config.order, in.decomp.eigenvalues);
  try {
    forward(p, in.decomp, vp, in.graph.features, Mode::Eval);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.layer() == 0);
  }
}

TEST_CASE("energy-weighted penalty") {
  const Instance in = instance(4);
  ModelParams p = init_model(small_config(BasisKind::Monomial), 1);
  p.weights.thetas[0] = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);
  p.config.lambda_ew = 0.5;
  const BasisMatrix vp = vandermonde(p.config.basis, p.config.order, in.decomp.eigenvalues);
  const auto nodes = range(10);
  const LossAndGrads lg =
      loss_and_grads(p, in.decomp, vp, in.graph.features, in.graph.labels, nodes, Mode::Eval);
  CHECK(lg.regularizer == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lg.loss == doctest::Approx(lg.cross_entropy + 0.5).epsilon(1e-14));

  p.config.lambda_ew = 0.0;
  const LossAndGrads plain =
      loss_and_grads(p, in.decomp, vp, in.graph.features, in.graph.labels, nodes, Mode::Eval);
  CHECK(plain.loss == plain.cross_entropy);
  const ForwardPass fp = forward(p, in.decomp, vp, in.graph.features, Mode::Eval);
  CHECK(plain.cross_entropy == doctest::Approx(cross_entropy(fp.logits, in.graph.labels, nodes)));

  CHECK(energy_ratio(Eigen::Vector2d(3.0, 3.0), Eigen::MatrixXd::Zero(2, 2)) == 0.0);
  CHECK(energy_ratio(Eigen::Vector2d(2.0, 0.0), Eigen::MatrixXd::Identity(2, 2)) ==
        doctest::Approx(2.0));
}

TEST_CASE("penalty gradient only reaches the first filter") {
  const Instance in = instance(5);
  ModelConfig cfg = small_config();
  cfg.filter_layers = 2;
  ModelParams p = init_model(cfg, 1);
  const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, in.decomp.eigenvalues);
  const auto nodes = range(10);
  const LossAndGrads a =
      loss_and_grads(p, in.decomp, vp, in.graph.features, in.graph.labels, nodes, Mode::Eval);
  p.config.lambda_ew = 2.0;
  const LossAndGrads b =
      loss_and_grads(p, in.decomp, vp, in.graph.features, in.graph.labels, nodes, Mode::Eval);
  CHECK(b.grads.w_in == a.grads.w_in);
  CHECK(b.grads.w_mid[0] == a.grads.w_mid[0]);
  CHECK(b.grads.thetas[1] == a.grads.thetas[1]);
  CHECK(b.grads.w_out == a.grads.w_out);
  CHECK(b.grads.thetas[0] != a.grads.thetas[0]);
}

TEST_CASE("reverse-mode gradients match central differences") {
  const CheckResult r = check_gradients(5, 20, 1234);
  INFO(format_check(r));
  CHECK(r.passed);
}

TEST_CASE("spatial and spectral filtering agree") {
  const CheckResult r = check_filter_equivalence(10, 25, 99);
  INFO(format_check(r));
  CHECK(r.passed);
}

TEST_CASE("Adam step") {
  ModelParams p = init_model(small_config(), 1);
  const ParamTensors before = p.weights;
  ParamTensors zero = p.weights.zeros_like();
  adam_step(p, zero, {0.01, 0.0});
  CHECK(p.weights.w_in == before.w_in);
  CHECK(p.adam.step == 1);

  ModelParams q = init_model(small_config(), 1);
  ParamTensors g = q.weights.zeros_like();
  g.w_in.setConstant(0.3);
  g.w_out.setConstant(-2.0);
  adam_step(q, g, {0.01, 0.0});
  CHECK(((q.weights.w_in - before.w_in).array() + 0.01).abs().maxCoeff() < 1e-7);
  CHECK(((q.weights.w_out - before.w_out).array() - 0.01).abs().maxCoeff() < 1e-7);

  ModelParams r = init_model(small_config(), 1);
  adam_step(r, r.weights.zeros_like(), {0.1, 0.5});
  CHECK((r.weights.w_in - before.w_in * (1.0 - 0.05)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectral norm") {
  CHECK(spectral_norm(Eigen::MatrixXd::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm(Eigen::Vector2d(3.0, -4.0).asDiagonal().toDenseMatrix()) ==
        doctest::Approx(4.0).epsilon(1e-10));
  CHECK(spectral_norm(Eigen::MatrixXd::Zero(3, 4)) == 0.0);
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd m = test::normal_matrix(20, 30, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m.transpose() * m);
  CHECK(std::abs(spectral_norm(m) - std::sqrt(ref.eigenvalues().maxCoeff())) < 1e-8);
  const SymmetricEigen own = symmetric_eigen(m.transpose() * m);
  CHECK(std::abs(spectral_norm(m) - std::sqrt(own.values.maxCoeff())) < 1e-8);
}

TEST_CASE("core Jacobian products") {
  const Instance in = instance(6);
  std::mt19937_64 rng(6);

  SUBCASE("identity single layer equals the Kronecker closed form") {
    ModelConfig cfg = small_config(BasisKind::Legendre, 4);
    ModelParams p = init_model(cfg, 2);
    p.weights.thetas[0] = test::normal_matrix(5, 1, rng).col(0);
    const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, in.decomp.eigenvalues);
    const CoreJacobian jac(p, in.decomp, vp, in.graph.features);
    const Eigen::MatrixXd& u = in.decomp.eigenvectors;
    const Eigen::MatrixXd filt = u * vp.response(p.weights.thetas[0]).asDiagonal() * u.transpose();
    const Eigen::MatrixXd v = test::normal_matrix(20, 4, rng);
    CHECK((jac.jvp(v) - filt * v * p.weights.w_mid[0]).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((jac.vjp(v) - filt * v * p.weights.w_mid[0].transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("vjp is the adjoint of jvp") {
    ModelConfig cfg = small_config(BasisKind::Chebyshev, 5);
    cfg.filter_layers = 3;
    cfg.activation = Activation::Relu;
    ModelParams p = init_model(cfg, 3);
    for (auto& th : p.weights.thetas) th = test::normal_matrix(6, 1, rng).col(0);
    const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, in.decomp.eigenvalues);
    const Eigen::MatrixXd a = test::normal_matrix(20, 4, rng);
    const Eigen::MatrixXd b = test::normal_matrix(20, 4, rng);
    const double lhs = (jacobian_apply(p, in.decomp, vp, in.graph.features, a, JacobianDirection::Jvp).array() * b.array()).sum();
    const double rhs = (a.array() * jacobian_apply(p, in.decomp, vp, in.graph.features, b, JacobianDirection::Vjp).array()).sum();
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
  }

  SUBCASE("jvp matches a finite-difference directional derivative") {
    ModelConfig cfg = small_config(BasisKind::Bernstein, 3);
    cfg.filter_layers = 2;
    cfg.activation = Activation::Relu;
    ModelParams p = init_model(cfg, 4);
    const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, in.decomp.eigenvalues);
    const CoreJacobian jac(p, in.decomp, vp, in.graph.features);
    const Eigen::MatrixXd v = test::normal_matrix(20, 4, rng);
    const double h = 1e-6;
    const Eigen::MatrixXd fd = (jac.evaluate(jac.core_input() + h * v) -
                                jac.evaluate(jac.core_input() - h * v)) / (2.0 * h);
    const Eigen::MatrixXd an = jac.jvp(v);
    CHECK((fd - an).norm() <= 1e-5 * an.norm());
  }

  SUBCASE("shape errors") {
    const ModelParams p = init_model(small_config(), 1);
    const BasisMatrix vp = vandermonde(p.config.basis, p.config.order, in.decomp.eigenvalues);
    const CoreJacobian jac(p, in.decomp, vp, in.graph.features);
    CHECK_THROWS_AS(jac.jvp(Eigen::MatrixXd::Zero(20, 3)), std::invalid_argument);
  }
}

TEST_CASE("training on a small block model") {
  SbmParams sp;
  sp.blocks = 3;
  sp.per_block = 40;
  sp.seed = 5;
  const Dataset data = prepare_dataset("sbm", generate_sbm(sp));
  const Split split = make_split(data.graph.labels, 10, 0.35, 9);
  ModelConfig cfg;
  cfg.basis = {BasisKind::Chebyshev, false};
  cfg.order = 4;
  TrainConfig tc;
  tc.max_epochs = 200;
  tc.patience = 50;

  const TrainResult a = train(cfg, tc, data, split, 17);
  const TrainResult b = train(cfg, tc, data, split, 17);
  CHECK(a.train_acc >= 0.9);
  CHECK(a.gap == a.test_loss - a.train_loss);
  CHECK(a.train_loss == b.train_loss);
  CHECK(a.test_loss == b.test_loss);
  CHECK(a.epochs_run == b.epochs_run);
  CHECK(a.params.weights.w_in == b.params.weights.w_in);
  CHECK(a.epochs_run <= tc.max_epochs);
  CHECK(a.epochs_run - a.best_epoch <= tc.patience);
  REQUIRE(a.measured_norms.w_mid.size() == 1);
  CHECK(a.measured_norms.theta[0] == doctest::Approx(a.params.weights.thetas[0].norm()));

  const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, data.decomp.eigenvalues);
  const Evaluation ev = evaluate(a.params, data, vp, split.test_idx);
  CHECK(ev.loss == a.test_loss);
  CHECK(ev.acc == a.test_acc);
}

TEST_CASE("early stopping on a plateau") {
  // Features carry no signal and the graph has no edges, so validation
  // accuracy cannot improve after the first epochs.
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(i % 2);
  const Graph g = make_graph(60, {}, Eigen::MatrixXd::Zero(60, 2), labels);
  const Dataset data = prepare_dataset("flat", g);
  const Split split = make_split(data.graph.labels, 5, 0.35, 1);
  ModelConfig cfg;
  cfg.order = 2;
  TrainConfig tc;
  tc.patience = 20;
  tc.max_epochs = 500;
  const TrainResult r = train(cfg, tc, data, split, 1);
  CHECK(r.epochs_run <= tc.patience + 1);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const Instance in = instance(7);
  ModelConfig cfg = small_config(BasisKind::Bernstein, 5);
  cfg.filter_layers = 2;
  cfg.activation = Activation::Relu;
  cfg.basis.rescaled = true;
  cfg.lambda_ew = 0.125;
  ModelParams p = init_model(cfg, 42);
  const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, in.decomp.eigenvalues);
  const LossAndGrads lg = loss_and_grads(p, in.decomp, vp, in.graph.features, in.graph.labels,
                                         range(10), Mode::Eval);
  adam_step(p, lg.grads, {0.01, 1e-4});

  std::stringstream ss;
  write_checkpoint(ss, p);
  const ModelParams q = read_checkpoint(ss);
  CHECK(config_to_string(q.config) == config_to_string(p.config));
  CHECK(q.adam.step == p.adam.step);
  const auto a = p.weights.views();
  const auto b = q.weights.views();
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t)
    for (std::size_t i = 0; i < a[t].size(); ++i) CHECK(a[t][i] == b[t][i]);
  CHECK(q.adam.m.w_out == p.adam.m.w_out);
  CHECK(q.adam.v.thetas[1] == p.adam.v.thetas[1]);

  std::stringstream bad("sgnn-checkpoint 1\nconfig nonsense\n");
  CHECK_THROWS_AS(read_checkpoint(bad, "bad"), ParseError);
}
