#include <cmath>
#include <vector>

#include "doctest.h"
#include "sgnn/polybasis/basis.hpp"

using namespace sgnn;

namespace {

void check_vector(const Eigen::VectorXd& got, const std::vector<double>& want, double tol = 1e-14) {
  REQUIRE(got.size() == static_cast<Eigen::Index>(want.size()));
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[static_cast<Eigen::Index>(i)] - want[i]) <= tol);
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

TEST_CASE("basis values at sample points") {
  check_vector(eval_basis({BasisKind::Chebyshev, false}, 3, 0.5), {1.0, 0.5, -0.5, -1.0});
  check_vector(eval_basis({BasisKind::Bernstein, false}, 2, 0.0), {0.25, 0.5, 0.25});
  check_vector(eval_basis({BasisKind::Legendre, false}, 2, 1.0), {1.0, 1.0, 1.0});
  check_vector(eval_basis({BasisKind::Monomial, false}, 2, 0.5), {1.0, 0.5, 0.25});
  // P_3(x) = (5x^3 - 3x) / 2
  check_vector(eval_basis({BasisKind::Legendre, false}, 3, 0.3),
               {1.0, 0.3, (3 * 0.09 - 1) / 2, (5 * 0.027 - 0.9) / 2});
}

TEST_CASE("rescaled bases divide by the peak amplification") {
  const Eigen::VectorXd plain = eval_basis({BasisKind::Chebyshev, false}, 4, 0.2);
  const Eigen::VectorXd scaled = eval_basis({BasisKind::Chebyshev, true}, 4, 0.2);
  CHECK((scaled * std::sqrt(5.0) - plain).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::VectorXd bern = eval_basis({BasisKind::Bernstein, false}, 4, 0.2);
  CHECK(eval_basis({BasisKind::Bernstein, true}, 4, 0.2) == bern);
  CHECK(peak_amplification(BasisKind::Legendre, 10) == doctest::Approx(std::sqrt(11.0)));
  CHECK(peak_amplification(BasisKind::Bernstein, 10) == 1.0);
}

TEST_CASE("basis evaluation errors and clamping") {
  CHECK_THROWS_AS(eval_basis({BasisKind::Monomial, false}, -1, 0.0), std::invalid_argument);
  CHECK(eval_basis({BasisKind::Monomial, false}, 3, 1.0 + 5e-10)[3] == 1.0);
  CHECK_THROWS_AS(eval_basis({BasisKind::Monomial, false}, 3, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(parse_basis_kind("jacobi"), std::invalid_argument);
  CHECK(parse_basis_kind("Chebyshev") == BasisKind::Chebyshev);
  CHECK(to_string(BasisKind::Bernstein) == "bernstein");
  const Eigen::VectorXd k0 = eval_basis({BasisKind::Bernstein, false}, 0, 0.3);
  check_vector(k0, {1.0});
}

TEST_CASE("Vandermonde matrix") {
  const BasisMatrix m = vandermonde({BasisKind::Monomial, false}, 2, Eigen::Vector2d(1.0, 0.0));
  CHECK(m.values.row(0) == Eigen::RowVector3d(1.0, 1.0, 1.0));
  CHECK(m.values.row(1) == Eigen::RowVector3d(1.0, 0.0, 0.0));
  CHECK(m.two_inf_norm == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(m.row_norms[1] == 1.0);

  Eigen::VectorXd lam = Eigen::VectorXd::LinSpaced(41, -1.0, 1.0);
  for (int k = 0; k <= 20; ++k) {
    CHECK(vandermonde({BasisKind::Bernstein, false}, k, lam).two_inf_norm <= 1.0 + 1e-12);
  }
  const BasisMatrix cheb = vandermonde({BasisKind::Chebyshev, false}, 10, lam);
  CHECK(cheb.two_inf_norm == doctest::Approx(std::sqrt(11.0)).epsilon(1e-12));
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    CHECK(std::abs(cheb.row_norms[i] - cheb.values.row(i).norm()) <= 1e-12);
    CHECK((cheb.values.row(i).transpose() - eval_basis(cheb.basis, 10, lam[i])).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(cheb.two_inf_norm == cheb.row_norms.maxCoeff());
}

TEST_CASE("amplification profile examples") {
  const double zero[] = {0.0};
  const double half[] = {0.5};
  const double ends[] = {-1.0, 1.0};
  CHECK(amplification_profile({BasisKind::Chebyshev, false}, 10, zero)[0] == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(amplification_profile({BasisKind::Monomial, false}, 2, half)[0] == doctest::Approx(1.3125).epsilon(1e-15));
  for (int k : {0, 3, 10, 20}) {
    for (double v : amplification_profile({BasisKind::Bernstein, false}, k, ends)) {
      CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  const std::vector<double> grid = uniform_grid();
  CHECK(grid.size() == 2001);
  CHECK(grid.front() == -1.0);
  CHECK(grid.back() == 1.0);
  const std::vector<double> norm = normalized_profile({BasisKind::Chebyshev, false}, 10, grid);
  CHECK(std::abs(norm[1000] - 6.0 / 11.0) < 1e-12);
  CHECK_THROWS_AS(amplification_profile({BasisKind::Chebyshev, false}, 3, std::span<const double>{}),
                  std::invalid_argument);
}

TEST_CASE("profile maxima sit at the endpoints") {
  const std::vector<double> grid = uniform_grid();
  const double ends[] = {-1.0, 1.0};
  for (BasisKind kind : kAllBases) {
    for (int k = 0; k <= 20; ++k) {
      const std::vector<double> prof = amplification_profile({kind, false}, k, grid);
      const std::vector<double> at_ends = amplification_profile({kind, false}, k, ends);
      const double end_max = std::max(at_ends[0], at_ends[1]);
      CHECK(*std::max_element(prof.begin(), prof.end()) <= end_max + 1e-10);
      const double expected = kind == BasisKind::Bernstein ? 1.0 : k + 1.0;
      CHECK(std::abs(end_max - expected) <= 1e-10);
      const std::vector<double> scaled = amplification_profile({kind, true}, k, grid);
      CHECK(std::abs(*std::max_element(scaled.begin(), scaled.end()) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("Bernstein partition of unity and bounded orthogonal bases") {
  const std::vector<double> grid = uniform_grid(401);
  for (int k = 0; k <= 20; ++k) {
    for (double x : grid) {
      CHECK(std::abs(eval_basis({BasisKind::Bernstein, false}, k, x).sum() - 1.0) <= 1e-12);
      CHECK(eval_basis({BasisKind::Chebyshev, false}, k, x).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
      CHECK(eval_basis({BasisKind::Legendre, false}, k, x).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("Bernstein values match the binomial form") {
  const double x = -0.35;
  const double t = (x + 1.0) / 2.0;
  for (int k = 1; k <= 20; ++k) {
    const Eigen::VectorXd b = eval_basis({BasisKind::Bernstein, false}, k, x);
    for (int i = 0; i <= k; ++i) {
      const double ref = binomial(k, i) * std::pow(t, i) * std::pow(1.0 - t, k - i);
      CHECK(std::abs(b[i] - ref) <= 1e-14);
    }
  }
}

TEST_CASE("midspectrum ordering of normalised profiles") {
  const std::vector<double> grid = uniform_grid();
  auto at_zero = [&](BasisKind kind) { return normalized_profile({kind, false}, 10, grid)[1000]; };
  const double mono = at_zero(BasisKind::Monomial);
  const double bern = at_zero(BasisKind::Bernstein);
  const double leg = at_zero(BasisKind::Legendre);
  const double cheb = at_zero(BasisKind::Chebyshev);
  CHECK(mono < bern);
  CHECK(mono < leg);
  CHECK(leg < cheb);
  // Closed forms: 1/11; C(20,10)/2^20; sum_k P_2k(0)^2 / 11.
  CHECK(mono == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(bern == doctest::Approx(binomial(20, 10) / std::pow(2.0, 20)).epsilon(1e-12));
  double leg_sum = 0.0;
  double p = 1.0;  // P_{2j}(0) = (-1)^j (2j-1)!! / (2j)!!
  for (int j = 0; j <= 5; ++j) {
    if (j > 0) p *= -(2.0 * j - 1.0) / (2.0 * j);
    leg_sum += p * p;
  }
  CHECK(leg == doctest::Approx(leg_sum / 11.0).epsilon(1e-12));
}

TEST_CASE("identity filter coefficients reproduce g(x) = x") {
  const std::vector<double> grid = uniform_grid(101);
  for (BasisKind kind : kAllBases) {
    for (bool rescaled : {false, true}) {
      for (int k = 1; k <= 12; ++k) {
        const Basis b{kind, rescaled};
        const Eigen::VectorXd theta = identity_filter_coefficients(b, k);
        REQUIRE(theta.size() == k + 1);
        for (double x : grid) CHECK(std::abs(eval_basis(b, k, x).dot(theta) - x) <= 1e-12);
      }
    }
  }
  CHECK(identity_filter_coefficients({BasisKind::Monomial, false}, 0).size() == 0);
  const Eigen::VectorXd mono = identity_filter_coefficients({BasisKind::Monomial, false}, 3);
  CHECK(mono == Eigen::Vector4d(0.0, 1.0, 0.0, 0.0));
}
