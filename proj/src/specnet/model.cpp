#include "sgnn/specnet/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sgnn {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd m(rows, cols);
  // Fill row-major so the draw order does not depend on Eigen's storage.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

std::string_view to_string(Activation a) {
  return a == Activation::Relu ? "relu" : "identity";
}

Activation parse_activation(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "relu") return Activation::Relu;
  if (s == "identity" || s == "linear") return Activation::Identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

double lipschitz_constant(Activation) { return 1.0; }

std::string_view to_string(RegTarget t) {
  return t == RegTarget::FilterInput ? "filter_input" : "raw_features";
}

RegTarget parse_reg_target(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "filter_input") return RegTarget::FilterInput;
  if (s == "raw_features") return RegTarget::RawFeatures;
  throw std::invalid_argument("unknown regularizer target '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (input_dim <= 0 || hidden <= 0 || classes <= 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (order < 0) throw std::invalid_argument("filter order must be >= 0");
  if (filter_layers < 1) throw std::invalid_argument("need at least one filter layer");
  if (!(dropout1 >= 0.0 && dropout1 < 1.0) || !(dropout2 >= 0.0 && dropout2 < 1.0)) {
    throw std::invalid_argument("dropout probabilities must lie in [0, 1)");
  }
  if (!(lambda_ew >= 0.0)) throw std::invalid_argument("lambda_ew must be >= 0");
  if (!(logit_bound > 0.0)) throw std::invalid_argument("logit bound must be positive");
}

ParamTensors ParamTensors::zeros_like() const {
  ParamTensors z;
  z.w_in = Eigen::MatrixXd::Zero(w_in.rows(), w_in.cols());
  for (const auto& t : thetas) z.thetas.push_back(Eigen::VectorXd::Zero(t.size()));
  for (const auto& w : w_mid) z.w_mid.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  z.w_out = Eigen::MatrixXd::Zero(w_out.rows(), w_out.cols());
  return z;
}

std::size_t ParamTensors::size() const {
  std::size_t total = 0;
  for (const auto& v : views()) total += v.size();
  return total;
}

bool ParamTensors::all_finite() const {
  for (const auto& v : views())
    for (double x : v)
      if (!std::isfinite(x)) return false;
  return true;
}

std::vector<std::span<double>> ParamTensors::views() {
  std::vector<std::span<double>> out;
  out.emplace_back(w_in.data(), static_cast<std::size_t>(w_in.size()));
  for (std::size_t l = 0; l < thetas.size(); ++l) {
    out.emplace_back(thetas[l].data(), static_cast<std::size_t>(thetas[l].size()));
    out.emplace_back(w_mid[l].data(), static_cast<std::size_t>(w_mid[l].size()));
  }
  out.emplace_back(w_out.data(), static_cast<std::size_t>(w_out.size()));
  return out;
}

std::vector<std::span<const double>> ParamTensors::views() const {
  std::vector<std::span<const double>> out;
  for (auto v : const_cast<ParamTensors*>(this)->views()) out.emplace_back(v.data(), v.size());
  return out;
}

std::vector<std::string> ParamTensors::names() const {
  std::vector<std::string> out{"w_in"};
  for (std::size_t l = 0; l < thetas.size(); ++l) {
    out.push_back("theta" + std::to_string(l));
    out.push_back("w_mid" + std::to_string(l));
  }
  out.push_back("w_out");
  return out;
}

ModelParams init_model(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  ModelParams p;
  p.config = config;
  p.config.seed = seed;

  auto& w = p.weights;
  w.w_in = uniform_matrix(config.input_dim, config.hidden, 1.0 / std::sqrt(config.input_dim), rng);
  const Eigen::VectorXd identity = identity_filter_coefficients(config.basis, config.order);
  for (int l = 0; l < config.filter_layers; ++l) {
    if (identity.size() > 0) {
      w.thetas.push_back(identity);
    } else {
      w.thetas.push_back(uniform_matrix(config.order + 1, 1, 0.1, rng).col(0));
    }
    w.w_mid.push_back(
        uniform_matrix(config.hidden, config.hidden, 1.0 / std::sqrt(config.hidden), rng));
  }
  w.w_out = uniform_matrix(config.hidden, config.classes, 1.0 / std::sqrt(config.hidden), rng);

  p.adam.m = w.zeros_like();
  p.adam.v = w.zeros_like();
  p.adam.step = 0;
  return p;
}

}  // namespace sgnn
