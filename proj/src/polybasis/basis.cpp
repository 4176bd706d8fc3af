#include "sgnn/polybasis/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgnn {
namespace {

constexpr double kDomainSlack = 1e-9;

void check_order(int order) {
  if (order < 0) throw std::invalid_argument("polynomial order must be >= 0");
}

void fill_raw(BasisKind kind, int order, double x, double* out) {
  const int K = order;
  switch (kind) {
    case BasisKind::Monomial: {
      double p = 1.0;
      for (int k = 0; k <= K; ++k) {
        out[k] = p;
        p *= x;
      }
      break;
    }
    case BasisKind::Chebyshev: {
      out[0] = 1.0;
      if (K >= 1) out[1] = x;
      for (int k = 1; k < K; ++k) out[k + 1] = 2.0 * x * out[k] - out[k - 1];
      break;
    }
    case BasisKind::Legendre: {
      out[0] = 1.0;
      if (K >= 1) out[1] = x;
      for (int k = 1; k < K; ++k) {
        out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
      }
      break;
    }
    case BasisKind::Bernstein: {
      const double t = 0.5 * (x + 1.0);
      double binom = 1.0;
      for (int k = 0; k <= K; ++k) {
        out[k] = binom * std::pow(t, k) * std::pow(1.0 - t, K - k);
        binom = binom * (K - k) / (k + 1.0);
      }
      break;
    }
  }
}

}  // namespace

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Monomial: return "monomial";
    case BasisKind::Chebyshev: return "chebyshev";
    case BasisKind::Legendre: return "legendre";
    case BasisKind::Bernstein: return "bernstein";
  }
  return "unknown";
}

BasisKind parse_basis_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (BasisKind k : kAllBases) {
    if (lower == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

double peak_amplification(BasisKind kind, int order) {
  check_order(order);
  if (kind == BasisKind::Bernstein) return 1.0;
  return std::sqrt(static_cast<double>(order) + 1.0);
}

Eigen::VectorXd eval_basis(Basis basis, int order, double x) {
  check_order(order);
  if (!(std::abs(x) <= 1.0 + kDomainSlack)) {
    throw std::invalid_argument("basis argument " + std::to_string(x) + " outside [-1, 1]");
  }
  x = std::clamp(x, -1.0, 1.0);
  Eigen::VectorXd out(order + 1);
  fill_raw(basis.kind, order, x, out.data());
  if (basis.rescaled) out /= peak_amplification(basis.kind, order);
  return out;
}

BasisMatrix vandermonde(Basis basis, int order, const Eigen::VectorXd& eigenvalues) {
  check_order(order);
  BasisMatrix bm;
  bm.basis = basis;
  bm.order = order;
  const Eigen::Index n = eigenvalues.size();
  bm.values.resize(n, order + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    bm.values.row(i) = eval_basis(basis, order, eigenvalues[i]).transpose();
  }
  bm.row_norms = bm.values.rowwise().norm();
  bm.two_inf_norm = n > 0 ? bm.row_norms.maxCoeff() : 0.0;
  return bm;
}

std::vector<double> amplification_profile(Basis basis, int order, std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("empty grid");
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(eval_basis(basis, order, x).squaredNorm());
  return out;
}

std::vector<double> normalized_profile(Basis basis, int order, std::span<const double> xs) {
  std::vector<double> out = amplification_profile(basis, order, xs);
  const double peak = *std::max_element(out.begin(), out.end());
  if (peak > 0.0) {
    for (double& v : out) v /= peak;
  }
  return out;
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> xs(points);
  // Exact integer numerator keeps x = 0 and the endpoints exact.
  const double m = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xs[i] = (2.0 * static_cast<double>(i) - m) / m;
  return xs;
}

Eigen::VectorXd identity_filter_coefficients(Basis basis, int order) {
  check_order(order);
  if (order == 0) return {};
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(order + 1);
  if (basis.kind == BasisKind::Bernstein) {
    // sum_k B_k(t) (2k/K - 1) = 2t - 1 = x
    for (int k = 0; k <= order; ++k) theta[k] = 2.0 * k / order - 1.0;
  } else {
    theta[1] = 1.0;
  }
  if (basis.rescaled) theta *= peak_amplification(basis.kind, order);
  return theta;
}

}  // namespace sgnn
