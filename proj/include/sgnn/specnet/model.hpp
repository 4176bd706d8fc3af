#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sgnn/polybasis/basis.hpp"

namespace sgnn {

enum class Activation { Relu, Identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);
/// Lipschitz constant of the activation (1 for both supported kinds).
double lipschitz_constant(Activation a);

/// Which signal the energy-weighted penalty measures.
enum class RegTarget { FilterInput, RawFeatures };

std::string_view to_string(RegTarget t);
RegTarget parse_reg_target(std::string_view name);

struct ModelConfig {
  int input_dim = 0;
  int hidden = 16;
  int classes = 0;
  int order = 10;
  Basis basis;
  int filter_layers = 1;
  Activation activation = Activation::Identity;  // inside each filter layer
  double dropout1 = 0.0;  // input features and post-filter features
  double dropout2 = 0.0;  // hidden features after the input MLP
  double lambda_ew = 0.0;
  RegTarget reg_target = RegTarget::FilterInput;
  bool clip_logits = false;
  double logit_bound = 50.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// The trainable tensors. Also used as the gradient and Adam-moment shape.
struct ParamTensors {
  Eigen::MatrixXd w_in;                // input_dim x hidden
  std::vector<Eigen::VectorXd> thetas;  // per filter layer, K+1
  std::vector<Eigen::MatrixXd> w_mid;   // per filter layer, hidden x hidden
  Eigen::MatrixXd w_out;               // hidden x classes

  ParamTensors zeros_like() const;
  std::size_t size() const;
  bool all_finite() const;

  /// Flat views over every tensor in a fixed order: w_in, (theta_l, w_mid_l)..., w_out.
  std::vector<std::span<double>> views();
  std::vector<std::span<const double>> views() const;
  std::vector<std::string> names() const;
};

struct AdamState {
  ParamTensors m;
  ParamTensors v;
  long step = 0;
};

struct ModelParams {
  ModelConfig config;
  ParamTensors weights;
  AdamState adam;
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights; thetas start at the
/// basis coefficients of g(x) = x (small uniform noise when K = 0).
ModelParams init_model(const ModelConfig& config, std::uint64_t seed);

}  // namespace sgnn
