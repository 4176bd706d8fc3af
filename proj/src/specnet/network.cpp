#include "sgnn/specnet/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgnn/errors.hpp"

namespace sgnn {
namespace {

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - p);
  const double scale = 1.0 / (1.0 - p);
  Eigen::MatrixXd mask(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) mask(i, j) = keep(rng) ? scale : 0.0;
  return mask;
}

void check_finite(const Eigen::MatrixXd& m, int layer, const char* what) {
  if (!m.allFinite()) {
    throw NonFiniteError(std::string("non-finite values in ") + what + " (layer " +
                             std::to_string(layer) + ")",
                         layer);
  }
}

Eigen::MatrixXd activate(Activation act, const Eigen::MatrixXd& z) {
  if (act == Activation::Relu) return z.cwiseMax(0.0);
  return z;
}

void check_shapes(const ModelParams& params, const SpectralDecomposition& decomp,
                  const BasisMatrix& vp, const Eigen::MatrixXd& x) {
  const ModelConfig& cfg = params.config;
  const auto n = static_cast<Eigen::Index>(decomp.size());
  if (x.rows() != n) throw std::invalid_argument("feature rows do not match the graph size");
  if (x.cols() != cfg.input_dim) throw std::invalid_argument("feature width does not match input_dim");
  if (vp.values.rows() != n || vp.values.cols() != cfg.order + 1) {
    throw std::invalid_argument("Vandermonde matrix does not match graph size / filter order");
  }
  const ParamTensors& w = params.weights;
  if (w.w_in.rows() != cfg.input_dim || w.w_in.cols() != cfg.hidden ||
      w.w_out.rows() != cfg.hidden || w.w_out.cols() != cfg.classes ||
      static_cast<int>(w.thetas.size()) != cfg.filter_layers ||
      static_cast<int>(w.w_mid.size()) != cfg.filter_layers) {
    throw std::invalid_argument("parameter shapes do not match the model config");
  }
  for (int l = 0; l < cfg.filter_layers; ++l) {
    if (w.thetas[l].size() != cfg.order + 1 || w.w_mid[l].rows() != cfg.hidden ||
        w.w_mid[l].cols() != cfg.hidden) {
      throw std::invalid_argument("filter layer " + std::to_string(l) + " has wrong shape");
    }
  }
}

}  // namespace

ForwardPass forward(const ModelParams& params, const SpectralDecomposition& decomp,
                    const BasisMatrix& vp, const Eigen::MatrixXd& x, Mode mode,
                    std::mt19937_64* rng) {
  check_shapes(params, decomp, vp, x);
  const ModelConfig& cfg = params.config;
  const ParamTensors& w = params.weights;
  const Eigen::MatrixXd& u = decomp.eigenvectors;
  const bool train = mode == Mode::Train;
  if (train && (cfg.dropout1 > 0.0 || cfg.dropout2 > 0.0) && rng == nullptr) {
    throw std::invalid_argument("train-mode dropout needs an rng");
  }

  ForwardPass fp;
  if (train && cfg.dropout1 > 0.0) {
    fp.input_mask = dropout_mask(x.rows(), x.cols(), cfg.dropout1, *rng);
    fp.input = x.cwiseProduct(fp.input_mask);
  } else {
    fp.input = x;
  }
  fp.pre_hidden = fp.input * w.w_in;
  fp.hidden = fp.pre_hidden.cwiseMax(0.0);
  if (train && cfg.dropout2 > 0.0) {
    fp.hidden_mask = dropout_mask(fp.hidden.rows(), fp.hidden.cols(), cfg.dropout2, *rng);
    fp.hidden = fp.hidden.cwiseProduct(fp.hidden_mask);
  }
  check_finite(fp.hidden, -1, "input MLP");

  Eigen::MatrixXd h = fp.hidden;
  fp.layers.resize(static_cast<std::size_t>(cfg.filter_layers));
  for (int l = 0; l < cfg.filter_layers; ++l) {
    FilterLayerTape& t = fp.layers[l];
    t.input_hat = u.transpose() * h;
    t.response = vp.values * w.thetas[l];
    t.filtered = u * (t.response.asDiagonal() * t.input_hat);
    t.pre_activation = t.filtered * w.w_mid[l];
    h = activate(cfg.activation, t.pre_activation) + h;
    check_finite(h, l, "filter layer");
  }
  fp.stack_output = h;

  if (train && cfg.dropout1 > 0.0) {
    fp.output_mask = dropout_mask(h.rows(), h.cols(), cfg.dropout1, *rng);
    fp.readout_input = h.cwiseProduct(fp.output_mask);
  } else {
    fp.readout_input = h;
  }
  fp.raw_logits = fp.readout_input * w.w_out;
  check_finite(fp.raw_logits, cfg.filter_layers, "readout");
  fp.logits = cfg.clip_logits ? fp.raw_logits.cwiseMax(-cfg.logit_bound).cwiseMin(cfg.logit_bound)
                              : fp.raw_logits;
  return fp;
}

double cross_entropy(const Eigen::MatrixXd& logits, std::span<const int> labels,
                     std::span<const std::size_t> nodes) {
  if (nodes.empty()) throw std::invalid_argument("empty node set");
  double total = 0.0;
  for (std::size_t i : nodes) {
    const auto row = logits.row(static_cast<Eigen::Index>(i));
    const double peak = row.maxCoeff();
    const double lse = peak + std::log((row.array() - peak).exp().sum());
    total += lse - row[labels[i]];
  }
  return total / static_cast<double>(nodes.size());
}

double accuracy(const Eigen::MatrixXd& logits, std::span<const int> labels,
                std::span<const std::size_t> nodes) {
  if (nodes.empty()) throw std::invalid_argument("empty node set");
  std::size_t hits = 0;
  for (std::size_t i : nodes) {
    Eigen::Index arg = 0;
    logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&arg);
    if (arg == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

double energy_ratio(const Eigen::VectorXd& response, const Eigen::MatrixXd& signal_hat) {
  const double denom = signal_hat.squaredNorm();
  if (denom == 0.0) return 0.0;
  return (response.asDiagonal() * signal_hat).squaredNorm() / denom;
}

LossAndGrads loss_and_grads(const ModelParams& params, const SpectralDecomposition& decomp,
                            const BasisMatrix& vp, const Eigen::MatrixXd& x,
                            std::span<const int> labels, std::span<const std::size_t> nodes,
                            Mode mode, std::mt19937_64* rng) {
  if (nodes.empty()) throw std::invalid_argument("loss mask is empty");
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw std::invalid_argument("labels length does not match node count");
  }
  const ModelConfig& cfg = params.config;
  const ParamTensors& w = params.weights;
  const Eigen::MatrixXd& u = decomp.eigenvectors;

  LossAndGrads out;
  out.pass = forward(params, decomp, vp, x, mode, rng);
  const ForwardPass& fp = out.pass;
  out.cross_entropy = cross_entropy(fp.logits, labels, nodes);

  // Spectral signal seen by the penalty; constant w.r.t. the parameters.
  Eigen::MatrixXd penalty_hat;
  if (cfg.reg_target == RegTarget::RawFeatures) {
    if (cfg.lambda_ew > 0.0) penalty_hat = u.transpose() * x;
  } else {
    penalty_hat = fp.layers.front().input_hat;
  }
  const Eigen::VectorXd& response0 = fp.layers.front().response;
  if (penalty_hat.size() > 0) out.regularizer = energy_ratio(response0, penalty_hat);
  out.loss = out.cross_entropy + cfg.lambda_ew * out.regularizer;
  if (!std::isfinite(out.loss)) throw NonFiniteError("non-finite loss", cfg.filter_layers);

  ParamTensors& g = out.grads;
  g = w.zeros_like();

  // Softmax cross-entropy.
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(fp.logits.rows(), fp.logits.cols());
  const double inv_count = 1.0 / static_cast<double>(nodes.size());
  for (std::size_t i : nodes) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto row = fp.logits.row(r);
    const double peak = row.maxCoeff();
    Eigen::RowVectorXd p = (row.array() - peak).exp();
    p /= p.sum();
    p[labels[i]] -= 1.0;
    d_logits.row(r) += p * inv_count;
  }
  if (cfg.clip_logits) {
    d_logits = d_logits.cwiseProduct(
        (fp.raw_logits.array().abs() <= cfg.logit_bound).cast<double>().matrix());
  }

  g.w_out = fp.readout_input.transpose() * d_logits;
  Eigen::MatrixXd d = d_logits * w.w_out.transpose();
  if (fp.output_mask.size() > 0) d = d.cwiseProduct(fp.output_mask);

  for (int l = cfg.filter_layers - 1; l >= 0; --l) {
    const FilterLayerTape& t = fp.layers[l];
    Eigen::MatrixXd d_pre = d;
    if (cfg.activation == Activation::Relu) {
      d_pre = d_pre.cwiseProduct((t.pre_activation.array() > 0.0).cast<double>().matrix());
    }
    g.w_mid[l] = t.filtered.transpose() * d_pre;
    const Eigen::MatrixXd q = u.transpose() * (d_pre * w.w_mid[l].transpose());
    const Eigen::VectorXd d_response = q.cwiseProduct(t.input_hat).rowwise().sum();
    g.thetas[l] = vp.values.transpose() * d_response;
    d += u * (t.response.asDiagonal() * q);
  }

  if (cfg.lambda_ew > 0.0 && penalty_hat.size() > 0) {
    const double denom = penalty_hat.squaredNorm();
    if (denom > 0.0) {
      const Eigen::VectorXd energy = penalty_hat.rowwise().squaredNorm();
      const Eigen::VectorXd d_resp = (2.0 / denom) * response0.cwiseProduct(energy);
      g.thetas[0] += cfg.lambda_ew * (vp.values.transpose() * d_resp);
    }
  }

  if (fp.hidden_mask.size() > 0) d = d.cwiseProduct(fp.hidden_mask);
  d = d.cwiseProduct((fp.pre_hidden.array() > 0.0).cast<double>().matrix());
  g.w_in = fp.input.transpose() * d;
  return out;
}

}  // namespace sgnn
