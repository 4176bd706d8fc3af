#include "sgnn/specnet/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sgnn {

double spectral_norm(const Eigen::MatrixXd& m, double tol, int max_iter) {
  if (m.size() == 0) throw std::invalid_argument("spectral_norm of an empty matrix");
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();

  double rq = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd w = m.transpose() * (m * v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - rq) <= tol * std::abs(next)) {
      rq = next;
      break;
    }
    rq = next;
  }
  return std::sqrt(std::max(rq, 0.0));
}

}  // namespace sgnn
