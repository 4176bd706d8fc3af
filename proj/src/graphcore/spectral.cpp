#include "sgnn/graphcore/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgnn/errors.hpp"

namespace sgnn {
namespace {

// Householder reduction to tridiagonal form. On exit `v` holds the
// accumulated orthogonal transform, `d` the diagonal and `e` the
// subdiagonal (e[0] unused).
void tridiagonalize(Eigen::MatrixXd& v, std::vector<double>& d, std::vector<double>& e) {
  const Eigen::Index n = v.rows();
  for (Eigen::Index j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (Eigen::Index i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (Eigen::Index j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (Eigen::Index k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (Eigen::Index j = 0; j < i; ++j) e[j] = 0.0;

      for (Eigen::Index j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (Eigen::Index j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (Eigen::Index j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (Eigen::Index j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (Eigen::Index k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (Eigen::Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (Eigen::Index k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (Eigen::Index j = 0; j <= i; ++j) {
        double g = 0.0;
        for (Eigen::Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (Eigen::Index k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of v.
void implicit_ql(Eigen::MatrixXd& v, std::vector<double>& d, std::vector<double>& e,
                 int max_sweeps_per_value) {
  const Eigen::Index n = v.rows();
  for (Eigen::Index i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    Eigen::Index m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > max_sweeps_per_value) {
          throw ConvergenceError("QL iteration did not converge for eigenvalue " +
                                     std::to_string(l),
                                 std::abs(e[l]));
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (Eigen::Index i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          auto col_i = v.col(i);
          auto col_next = v.col(i + 1);
          for (Eigen::Index k = 0; k < n; ++k) {
            h = col_next[k];
            col_next[k] = s * col_i[k] + c * h;
            col_i[k] = c * col_i[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (vectors(best, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

double max_asymmetry(const Eigen::MatrixXd& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, int max_sweeps_per_value) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
  const Eigen::Index n = a.rows();
  if (n == 0) throw std::invalid_argument("empty matrix");

  Eigen::MatrixXd v = a;
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  tridiagonalize(v, d, e);
  implicit_ql(v, d, e, max_sweeps_per_value);

  // Stable ascending order keeps ties in QL output order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return d[x] < d[y]; });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    out.vectors.col(j) = v.col(order[j]);
  }
  fix_signs(out.vectors);
  return out;
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw std::invalid_argument("matrix is not square");
  if (adjacency.rows() == 0) throw std::invalid_argument("empty matrix");
  if (max_asymmetry(adjacency) > kSymmetryTolerance) {
    throw std::invalid_argument("matrix is not symmetric within 1e-12");
  }

  SymmetricEigen eig = symmetric_eigen(adjacency);

  SpectralDecomposition out;
  out.eigenvalues = std::move(eig.values);
  out.eigenvectors = std::move(eig.vectors);
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    double& lam = out.eigenvalues[i];
    const double excess = std::abs(lam) - 1.0;
    if (excess > kClampTolerance) {
      throw std::invalid_argument("eigenvalue " + std::to_string(lam) +
                                  " outside [-1, 1]; input is not a normalized adjacency");
    }
    if (excess > 0.0) {
      out.clamp = std::max(out.clamp, excess);
      lam = std::clamp(lam, -1.0, 1.0);
    }
  }

  const Eigen::MatrixXd& u = out.eigenvectors;
  out.residual =
      (adjacency * u - u * out.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
  out.orthogonality =
      (u.transpose() * u - Eigen::MatrixXd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  if (out.residual > kEigenTolerance || out.orthogonality > kEigenTolerance) {
    throw ConvergenceError("eigendecomposition failed post-check (residual " +
                               std::to_string(out.residual) + ", orthogonality " +
                               std::to_string(out.orthogonality) + ")",
                           std::max(out.residual, out.orthogonality));
  }
  return out;
}

Eigen::MatrixXd gft(const SpectralDecomposition& decomp, const Eigen::MatrixXd& x,
                    GftDirection direction) {
  if (x.rows() != decomp.eigenvectors.rows()) {
    throw std::invalid_argument("signal has " + std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(decomp.eigenvectors.rows()));
  }
  if (direction == GftDirection::Forward) return decomp.eigenvectors.transpose() * x;
  return decomp.eigenvectors * x;
}

}  // namespace sgnn
