#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "sgnn/graphcore/spectral.hpp"
#include "sgnn/polybasis/basis.hpp"
#include "sgnn/specnet/model.hpp"

namespace sgnn {

struct PowerIterationResult {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double last_gap = 0.0;  // relative change between the last two Rayleigh quotients
};

/// Largest singular value of the spectral-core Jacobian (see CoreJacobian),
/// by power iteration v <- J^T J v / ||.|| without materialising J.
/// The estimate is a lower bound of the true norm at every iterate; when the
/// budget runs out `converged` is false and `last_gap` says how far off it was.
PowerIterationResult true_jacobian_norm(const ModelParams& params,
                                        const SpectralDecomposition& decomp,
                                        const BasisMatrix& vp, const Eigen::MatrixXd& x,
                                        double tol = 1e-6, int max_iter = 1000);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// E_g[max_f <g, f>] / n for a finite function set (one column per f),
/// g ~ N(0, I_n). Throws when the set is empty or samples < 2.
MonteCarloEstimate ftgc_monte_carlo(const Eigen::MatrixXd& functions, int samples,
                                    std::uint64_t seed);

}  // namespace sgnn
