#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sgnn/graphcore/spectral.hpp"
#include "sgnn/polybasis/basis.hpp"
#include "sgnn/specnet/model.hpp"

namespace sgnn {

enum class Mode { Train, Eval };

struct FilterLayerTape {
  Eigen::MatrixXd input_hat;       // U^T H
  Eigen::VectorXd response;        // V_P theta
  Eigen::MatrixXd filtered;        // U diag(response) U^T H
  Eigen::MatrixXd pre_activation;  // filtered * W_mid
};

/// Every intermediate of one forward pass, in evaluation order. Dropout
/// masks are stored pre-scaled by 1/(1-p) and are empty when no dropout ran.
struct ForwardPass {
  Eigen::MatrixXd input;  // X after dropout1
  Eigen::MatrixXd input_mask;
  Eigen::MatrixXd pre_hidden;  // input * W_in
  Eigen::MatrixXd hidden_mask;
  Eigen::MatrixXd hidden;  // input of the first filter layer
  std::vector<FilterLayerTape> layers;
  Eigen::MatrixXd stack_output;  // after the last residual filter layer
  Eigen::MatrixXd output_mask;
  Eigen::MatrixXd readout_input;
  Eigen::MatrixXd raw_logits;
  Eigen::MatrixXd logits;  // raw_logits, clipped to [-B, B] when enabled
};

/// X -> dropout1 -> W_in -> relu -> dropout2 -> H, then per filter layer
/// H <- act(U diag(V_P theta) U^T H W_mid) + H, then dropout1 -> W_out.
/// `rng` is required in Train mode when any dropout is active.
/// Throws NonFiniteError with the filter layer index (-1 for the input MLP,
/// filter_layers for the readout).
ForwardPass forward(const ModelParams& params, const SpectralDecomposition& decomp,
                    const BasisMatrix& vp, const Eigen::MatrixXd& x, Mode mode,
                    std::mt19937_64* rng = nullptr);

/// Mean softmax cross-entropy of `logits` over the rows in `nodes`.
double cross_entropy(const Eigen::MatrixXd& logits, std::span<const int> labels,
                     std::span<const std::size_t> nodes);
double accuracy(const Eigen::MatrixXd& logits, std::span<const int> labels,
                std::span<const std::size_t> nodes);

/// ||diag(response) S||_F^2 / ||S||_F^2 for a spectral-domain signal S; 0 when S = 0.
double energy_ratio(const Eigen::VectorXd& response, const Eigen::MatrixXd& signal_hat);

struct LossAndGrads {
  double loss = 0.0;           // cross_entropy + lambda_ew * regularizer
  double cross_entropy = 0.0;
  double regularizer = 0.0;    // R_EW
  ParamTensors grads;
  ForwardPass pass;
};

/// Reverse-mode sweep over the tape of one forward pass. The penalty input
/// is treated as a constant, so R_EW only contributes to theta of layer 0.
LossAndGrads loss_and_grads(const ModelParams& params, const SpectralDecomposition& decomp,
                            const BasisMatrix& vp, const Eigen::MatrixXd& x,
                            std::span<const int> labels, std::span<const std::size_t> nodes,
                            Mode mode = Mode::Train, std::mt19937_64* rng = nullptr);

}  // namespace sgnn
