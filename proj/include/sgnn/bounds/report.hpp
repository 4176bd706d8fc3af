#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgnn/bounds/bounds.hpp"
#include "sgnn/bounds/estimators.hpp"
#include "sgnn/graphcore/spectral.hpp"
#include "sgnn/specnet/model.hpp"

namespace sgnn {

struct BoundOptions {
  double delta = 0.05;
  double c1 = 1.0;
  double c2 = 1.0;
  bool measure_jacobian = true;
  double jacobian_tol = 1e-6;
  int jacobian_max_iter = 1000;
};

/// Every bound for one trained model.
///
/// Bounds cover the spectral filter stack only, evaluated without its
/// residual connections: E_0 is the spectral energy of the stack's input
/// (eval-mode output of the input MLP), C_W,l = ||W_mid_l||_2 and
/// C_theta,l = ||theta_l||_2. The input MLP and readout enter only through
/// `wrapper_prefactor` = ||W_in||_2 ||W_out||_2, which is reported and not
/// multiplied in.
struct BoundReport {
  BoundInputs inputs;
  double ftgc_nonlinear = 0.0;
  double ftgc_linear = 0.0;
  double weight_term = 0.0;
  double spectral_term = 0.0;
  GapBound gap;  // from ftgc_nonlinear
  double jacobian_bound = 0.0;
  double wrapper_prefactor = 0.0;
  std::optional<PowerIterationResult> true_jacobian;
  std::string scope = "filter_stack_without_residual";
};

BoundReport compute_bound_report(const ModelParams& params, const SpectralDecomposition& decomp,
                                 const Eigen::MatrixXd& x, std::size_t labelled,
                                 const BoundOptions& options = {});

/// key=value lines, fixed order.
std::string format_report(const BoundReport& report);
std::string report_csv_header();
std::string report_csv_row(const BoundReport& report);

struct DepthPoint {
  int layers = 0;
  double ftgc_nonlinear = 0.0;
  double ftgc_linear = 0.0;
  double jacobian_bound = 0.0;
  double adjacency_inf_norm_pow = 0.0;  // ||A_hat||_inf^L, a growth proxy for spatial bounds
};

/// Bounds for depths 1..max_layers, repeating the first layer's constants.
std::vector<DepthPoint> depth_curve(const BoundInputs& base, int max_layers,
                                    double adjacency_inf_norm);

}  // namespace sgnn
