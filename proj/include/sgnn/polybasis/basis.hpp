#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sgnn {

enum class BasisKind { Monomial, Chebyshev, Legendre, Bernstein };

inline constexpr BasisKind kAllBases[] = {BasisKind::Monomial, BasisKind::Chebyshev,
                                          BasisKind::Legendre, BasisKind::Bernstein};

struct Basis {
  BasisKind kind = BasisKind::Chebyshev;
  /// Divide every P_k by sqrt(max_x M_K(x)) so that the peak amplification is 1.
  bool rescaled = false;
  friend bool operator==(const Basis&, const Basis&) = default;
};

std::string_view to_string(BasisKind kind);
/// Accepts monomial|chebyshev|legendre|bernstein (case-insensitive).
BasisKind parse_basis_kind(std::string_view name);

/// sqrt(max_{x in [-1,1]} M_K(x)) from the analytic endpoint values:
/// sqrt(K+1) for Monomial/Chebyshev/Legendre, 1 for Bernstein.
double peak_amplification(BasisKind kind, int order);

/// P_0(x) .. P_K(x). |x| may exceed 1 by at most 1e-9 (clamped).
Eigen::VectorXd eval_basis(Basis basis, int order, double x);

/// Generalised Vandermonde matrix with entries P_k(lambda_i).
struct BasisMatrix {
  Eigen::MatrixXd values;     // n x (K+1)
  Eigen::VectorXd row_norms;  // ||v_i||_2
  double two_inf_norm = 0.0;  // max_i ||v_i||_2
  Basis basis;
  int order = 0;

  Eigen::VectorXd response(const Eigen::VectorXd& theta) const { return values * theta; }
};

BasisMatrix vandermonde(Basis basis, int order, const Eigen::VectorXd& eigenvalues);

/// M_K(x) = sum_k P_k(x)^2 at every grid point.
std::vector<double> amplification_profile(Basis basis, int order, std::span<const double> xs);

/// Same profile divided by its maximum over the grid.
std::vector<double> normalized_profile(Basis basis, int order, std::span<const double> xs);

/// `points` uniformly spaced values covering [-1, 1] including both endpoints.
std::vector<double> uniform_grid(std::size_t points = 2001);

/// Coefficients reproducing g(x) = x in the given basis, when the order allows it.
/// Returns an empty vector for K = 0.
Eigen::VectorXd identity_filter_coefficients(Basis basis, int order);

}  // namespace sgnn
