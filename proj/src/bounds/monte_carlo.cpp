#include <cmath>
#include <random>
#include <stdexcept>

#include "sgnn/bounds/estimators.hpp"
#include "sgnn/specnet/jacobian.hpp"

namespace sgnn {

PowerIterationResult true_jacobian_norm(const ModelParams& params,
                                        const SpectralDecomposition& decomp,
                                        const BasisMatrix& vp, const Eigen::MatrixXd& x,
                                        double tol, int max_iter) {
  const CoreJacobian jac(params, decomp, vp, x);
  std::mt19937_64 rng(0x853c49e6748fea9bULL);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd v(jac.rows(), jac.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, j) = normal(rng);
  v /= v.norm();

  PowerIterationResult r;
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::MatrixXd w = jac.vjp(jac.jvp(v));
    const double rq = (v.array() * w.array()).sum();
    const double wn = w.norm();
    r.iterations = it;
    if (wn == 0.0) {
      r.norm = 0.0;
      r.converged = true;
      r.last_gap = 0.0;
      return r;
    }
    v = w / wn;
    r.norm = std::sqrt(std::max(rq, 0.0));
    if (it > 1) {
      r.last_gap = std::abs(rq - prev) / std::max(std::abs(rq), 1e-300);
      if (r.last_gap < tol) {
        r.converged = true;
        return r;
      }
    }
    prev = rq;
  }
  return r;
}

MonteCarloEstimate ftgc_monte_carlo(const Eigen::MatrixXd& functions, int samples,
                                    std::uint64_t seed) {
  if (functions.cols() == 0 || functions.rows() == 0) {
    throw std::invalid_argument("function set is empty");
  }
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const double n = static_cast<double>(functions.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd g(functions.rows());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = normal(rng);
    const double best = (functions.transpose() * g).maxCoeff() / n;
    sum += best;
    sum_sq += best * best;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(var / count)};
}

}  // namespace sgnn
