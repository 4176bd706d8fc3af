#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sgnn/polybasis/basis.hpp"

namespace sgnn {

/// Conversion constant between transductive Rademacher and Gaussian complexity.
inline const double kGaussianComplexityConstant = std::sqrt(std::numbers::pi / 2.0);

struct BoundInputs {
  Eigen::VectorXd row_norms;   // ||v_i||_2 of the Vandermonde matrix
  double two_inf_norm = 0.0;   // ||V_P||_{2,inf}
  Eigen::VectorXd energy;      // E_0(lambda_i) >= 0
  double alpha = 1.0;          // activation Lipschitz constant
  std::vector<double> c_w;     // per-layer weight spectral-norm constants
  std::vector<double> c_theta; // per-layer filter-coefficient norm constants
  std::size_t n = 0;           // all nodes
  std::size_t m = 0;           // labelled nodes
  double delta = 0.05;
  double c1 = 1.0;
  double c2 = 1.0;

  int layers() const { return static_cast<int>(c_w.size()); }
  std::size_t u() const { return n - m; }

  /// Fills row_norms / two_inf_norm from a Vandermonde matrix.
  void set_basis(const BasisMatrix& vp) {
    row_norms = vp.row_norms;
    two_inf_norm = vp.two_inf_norm;
  }
};

/// E_0(lambda_i): squared 2-norm of row i of the spectral-domain signal.
Eigen::VectorXd spectral_energy(const Eigen::MatrixXd& signal_hat);

struct NonlinearFtgc {
  double value = 0.0;
  double weight_term = 0.0;    // prod_l alpha C_W,l C_theta,l
  double spectral_term = 0.0;  // ||V||^{L-1} (sum ||v_i||^2 E_0)^{1/2} / sqrt(n)
};

/// (1/sqrt n) ||V||^{L-1} prod(alpha C_W C_theta) (sum_i ||v_i||^2 E_0(lambda_i))^{1/2}
NonlinearFtgc ftgc_nonlinear_bound(const BoundInputs& in);

/// (1/n) prod(C_W C_theta) (sum_i ||v_i||^{2L} E_0(lambda_i))^{1/2}
double ftgc_linear_bound(const BoundInputs& in);

struct GapBound {
  double complexity_term = 0.0;  // n^2 C_gc / (m u) * ftgc
  double partition_term = 0.0;   // C1 n sqrt(min(m,u)) / (m u)
  double confidence_term = 0.0;  // C2 sqrt(n / (m u) ln(1/delta))
  double total() const { return complexity_term + partition_term + confidence_term; }
};

/// Bound on R_U - R_L given an FTGC value.
GapBound gap_bound(double ftgc, const BoundInputs& in);

/// prod_l alpha C_W,l C_theta,l ||V_P||_{2,inf}
double jacobian_norm_bound(const BoundInputs& in);

}  // namespace sgnn
