#pragma once

#include <Eigen/Dense>

namespace sgnn {

/// Largest singular value by power iteration on M^T M. Stops when the
/// Rayleigh quotient changes by less than `tol` relative, or after
/// `max_iter` iterations. Zero matrix -> 0.
double spectral_norm(const Eigen::MatrixXd& m, double tol = 1e-10, int max_iter = 10000);

}  // namespace sgnn
