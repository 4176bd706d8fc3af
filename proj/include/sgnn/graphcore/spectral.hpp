#pragma once

#include <Eigen/Dense>

namespace sgnn {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

/// Householder tridiagonalisation followed by implicit-shift QL.
/// Eigenvalues ascending; each eigenvector is signed so that its
/// largest-magnitude entry (lowest index on ties) is positive.
/// Throws ConvergenceError if an eigenvalue needs more than
/// `max_sweeps_per_value` QL sweeps.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, int max_sweeps_per_value = 60);

/// Spectrum of a normalized adjacency plus the orthonormal GFT basis.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending, clamped to [-1, 1]
  Eigen::MatrixXd eigenvectors;  // U
  double residual = 0.0;         // max |A U - U Lambda|
  double orthogonality = 0.0;    // max |U^T U - I|
  double clamp = 0.0;            // largest |lambda| excursion beyond 1 that was clamped

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kEigenTolerance = 1e-8;
inline constexpr double kClampTolerance = 1e-9;

/// Full eigendecomposition of a normalized adjacency. Rejects asymmetric
/// input, and eigenvalues further than 1e-9 outside [-1, 1]. Throws
/// ConvergenceError carrying the residual when the residual or
/// orthogonality check exceeds 1e-8.
SpectralDecomposition eigendecompose(const Eigen::MatrixXd& adjacency);

enum class GftDirection { Forward, Inverse };

/// Forward: U^T X. Inverse: U X.
Eigen::MatrixXd gft(const SpectralDecomposition& decomp, const Eigen::MatrixXd& x,
                    GftDirection direction);

}  // namespace sgnn
