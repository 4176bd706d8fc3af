#pragma once

#include <span>
#include <string>
#include <vector>

namespace sgnn {

struct CorrelationReport {
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  double fisher_ci_low = 0.0;   // 95% CI of pearson_r
  double fisher_ci_high = 0.0;
  double spearman_ci_low = 0.0;  // same Fisher transform applied to rho
  double spearman_ci_high = 0.0;
  std::size_t n_points = 0;
};

/// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> xs);

double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson and Spearman correlation with Fisher-z 95% intervals
/// z +- 1.96 / sqrt(n - 3). Needs n >= 4 and non-zero variance in both inputs.
CorrelationReport correlate(std::span<const double> xs, std::span<const double> ys);

struct PairedTest {
  double delta_mean = 0.0;  // mean(reg - base)
  double t_stat = 0.0;
  double p_value = 1.0;     // two-sided paired t-test
  std::string stars;        // "*", "**", "***" at p < 0.05, 0.01, 0.001
  bool degenerate = false;  // all differences identical
};

/// Paired t-test of reg_vals against base_vals. When every difference is the
/// same, p is 1 if that difference is 0 and 0 otherwise (flagged degenerate).
PairedTest paired_test(std::span<const double> base_vals, std::span<const double> reg_vals);

std::string significance_stars(double p_value);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 95% t interval half-width; 0 for a single value
};

MeanCi mean_ci95(std::span<const double> values);

/// Two-sided Student-t tail probability P(|T| >= |t|) with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

}  // namespace sgnn
