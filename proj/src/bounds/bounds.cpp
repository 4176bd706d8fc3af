#include "sgnn/bounds/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgnn {
namespace {

void check_layers(const BoundInputs& in) {
  if (in.c_w.empty()) throw std::invalid_argument("need at least one layer");
  if (in.c_w.size() != in.c_theta.size()) {
    throw std::invalid_argument("C_W and C_theta have different layer counts");
  }
}

void check_energy(const BoundInputs& in) {
  if (in.energy.size() != in.row_norms.size()) {
    throw std::invalid_argument("energy length does not match the number of eigenvalues");
  }
  if (in.n == 0) throw std::invalid_argument("n must be positive");
  if ((in.energy.array() < 0.0).any()) throw std::invalid_argument("energy must be >= 0");
}

}  // namespace

Eigen::VectorXd spectral_energy(const Eigen::MatrixXd& signal_hat) {
  return signal_hat.rowwise().squaredNorm();
}

NonlinearFtgc ftgc_nonlinear_bound(const BoundInputs& in) {
  check_layers(in);
  check_energy(in);
  NonlinearFtgc out;
  out.weight_term = 1.0;
  for (int l = 0; l < in.layers(); ++l) out.weight_term *= in.alpha * in.c_w[l] * in.c_theta[l];
  const double interaction = std::sqrt(in.row_norms.array().square().cwiseProduct(in.energy.array()).sum());
  out.spectral_term = std::pow(in.two_inf_norm, in.layers() - 1) * interaction /
                      std::sqrt(static_cast<double>(in.n));
  out.value = out.weight_term * out.spectral_term;
  return out;
}

double ftgc_linear_bound(const BoundInputs& in) {
  check_layers(in);
  check_energy(in);
  double weights = 1.0;
  for (int l = 0; l < in.layers(); ++l) weights *= in.c_w[l] * in.c_theta[l];
  const double interaction =
      std::sqrt(in.row_norms.array().pow(2.0 * in.layers()).cwiseProduct(in.energy.array()).sum());
  return weights * interaction / static_cast<double>(in.n);
}

GapBound gap_bound(double ftgc, const BoundInputs& in) {
  if (in.m == 0 || in.m >= in.n) throw std::invalid_argument("need 0 < m < n");
  if (!(in.delta > 0.0 && in.delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  const double u = static_cast<double>(in.u());
  GapBound g;
  g.complexity_term = n * n * kGaussianComplexityConstant / (m * u) * ftgc;
  g.partition_term = in.c1 * n * std::sqrt(std::min(m, u)) / (m * u);
  g.confidence_term = in.c2 * std::sqrt(n / (m * u) * std::log(1.0 / in.delta));
  return g;
}

double jacobian_norm_bound(const BoundInputs& in) {
  check_layers(in);
  double out = 1.0;
  for (int l = 0; l < in.layers(); ++l) {
    out *= in.alpha * in.c_w[l] * in.c_theta[l] * in.two_inf_norm;
  }
  return out;
}

}  // namespace sgnn
