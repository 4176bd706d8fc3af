#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sgnn {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // the statistic compared against the tolerance
  std::string detail;
};

/// Endpoint maxima, the normalised Chebyshev midpoint value, Bernstein
/// partition of unity and rescaled peaks for every basis with K <= max_order.
CheckResult check_amplification_profiles(int max_order = 20);

/// Residual and orthogonality on `graphs` random graphs with up to `max_n`
/// nodes, plus the path-graph spectrum and bitwise repeatability.
CheckResult check_eigendecomposition(int graphs, int max_n, std::uint64_t seed);

/// Reverse-mode gradients against central differences (h = 1e-5). Entry-wise
/// relative error |a - f| / max(|a|, |f|, 1e-6).
CheckResult check_gradients(int seeds, int nodes, std::uint64_t seed);

/// sum_k theta_k P_k(A_hat) H W (matrix recurrences) against
/// U diag(V_P theta) U^T H W for every basis and K in 1..max_order.
CheckResult check_filter_equivalence(int max_order, int nodes, std::uint64_t seed);

/// Monte-Carlo FTGC of a 16-function set in the vertex and Fourier domains,
/// compared within 3 combined standard errors.
CheckResult check_ftgc_invariance(int samples, int nodes, std::uint64_t seed);

/// ||relu(X) - relu(Y)||_F <= ||X - Y||_F over random pairs (slack >= -1e-12).
CheckResult check_relu_lipschitz(int pairs, std::uint64_t seed);

/// Power-iteration Jacobian norm against the bound on random models, and
/// against ||W||_2 max_i |<v_i, theta>| for one identity-activation layer.
CheckResult check_jacobian(int models, int nodes, std::uint64_t seed);

/// ftgc_linear <= ftgc_nonlinear / sqrt(n) on random bound inputs.
CheckResult check_bound_ordering(int configs, std::uint64_t seed);

/// Split stratification, disjointness and seed determinism.
CheckResult check_splits(std::uint64_t seed);

/// The fast suite run by the `selftest` command.
std::vector<CheckResult> run_selftest(std::uint64_t seed);

/// "PASS name worst=... detail" / "FAIL ...".
std::string format_check(const CheckResult& check);

}  // namespace sgnn
