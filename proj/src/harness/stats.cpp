#include "sgnn/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace sgnn {
namespace {

constexpr double kZ975 = 1.96;

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

void fisher_ci(double r, std::size_t n, double& lo, double& hi) {
  if (std::abs(r) >= 1.0) {
    lo = hi = r;
    return;
  }
  const double z = std::atanh(r);
  const double se = 1.0 / std::sqrt(static_cast<double>(n) - 3.0);
  lo = std::tanh(z - kZ975 * se);
  hi = std::tanh(z + kZ975 * se);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("correlation inputs differ in length");
  if (xs.size() < 2) throw std::invalid_argument("need at least two points");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("zero variance in correlation input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport correlate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("correlation inputs differ in length");
  if (xs.size() < 4) throw std::invalid_argument("correlation needs at least 4 points");
  CorrelationReport r;
  r.n_points = xs.size();
  r.pearson_r = pearson(xs, ys);
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  r.spearman_rho = pearson(rx, ry);
  fisher_ci(r.pearson_r, r.n_points, r.fisher_ci_low, r.fisher_ci_high);
  fisher_ci(r.spearman_rho, r.n_points, r.spearman_ci_low, r.spearman_ci_high);
  return r;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

double student_t_two_sided_p(double t, double dof) {
  if (!std::isfinite(t)) return 0.0;
  const boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

PairedTest paired_test(std::span<const double> base_vals, std::span<const double> reg_vals) {
  if (base_vals.size() != reg_vals.size()) throw std::invalid_argument("paired samples differ in length");
  if (base_vals.size() < 2) throw std::invalid_argument("paired test needs at least 2 pairs");
  std::vector<double> d(base_vals.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = reg_vals[i] - base_vals[i];

  PairedTest out;
  out.delta_mean = mean_of(d);
  // Differences equal up to rounding (e.g. reg = base + c in floating point).
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  if (*hi - *lo <= 1e-12 * std::max(scale, 1.0)) {
    const bool zero = scale <= 1e-12;
    out.degenerate = true;
    out.delta_mean = zero ? 0.0 : out.delta_mean;
    out.t_stat = zero ? 0.0 : std::copysign(INFINITY, out.delta_mean);
    out.p_value = zero ? 1.0 : 0.0;
    out.stars = significance_stars(out.p_value);
    return out;
  }
  double ss = 0.0;
  for (double v : d) ss += (v - out.delta_mean) * (v - out.delta_mean);
  const double n = static_cast<double>(d.size());
  const double sd = std::sqrt(ss / (n - 1.0));
  out.t_stat = out.delta_mean / (sd / std::sqrt(n));
  out.p_value = student_t_two_sided_p(out.t_stat, n - 1.0);
  out.stars = significance_stars(out.p_value);
  return out;
}

MeanCi mean_ci95(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sample");
  MeanCi out;
  out.mean = mean_of(values);
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double n = static_cast<double>(values.size());
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  out.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n);
  return out;
}

}  // namespace sgnn
