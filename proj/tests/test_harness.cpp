#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "sgnn/errors.hpp"
#include "sgnn/graphcore/dataset.hpp"
#include "sgnn/harness/ablation.hpp"
#include "sgnn/harness/bundle.hpp"
#include "sgnn/harness/pool.hpp"
#include "sgnn/harness/sbm.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/harness/stats.hpp"
#include "sgnn/harness/sweep.hpp"
#include "sgnn/harness/text.hpp"

using namespace sgnn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("sgnn_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream(path / name) << body;
  }
};

// Student-t density integrated with composite Simpson on [0, |t|].
double t_two_sided_oracle(double t, double dof) {
  const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) /
                   std::sqrt(dof * std::acos(-1.0));
  auto f = [&](double x) { return c * std::pow(1 + x * x / dof, -(dof + 1) / 2); };
  const int steps = 20000;
  const double h = std::abs(t) / steps;
  double s = f(0) + f(std::abs(t));
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
  return 1 - 2 * s * h / 3;
}

SbmParams small_sbm(std::uint64_t seed = 0) {
  SbmParams p;
  p.per_block = 20;
  p.p_in = 0.3;
  p.p_out = 0.05;
  p.feature_dim = 4;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("graph bundle: path graph") {
  TempDir dir("bundle");
  dir.write("edges.tsv", "# path\n0\t1\n1\t2\n2\t1\n");
  dir.write("features.csv", "1,0\n0,1\n1,1\n");
  dir.write("labels.csv", "0\n1\n0\n");
  const Graph g = load_graph_bundle(dir.path);
  CHECK(g.n == 3);
  CHECK(g.feature_dim() == 2);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0] == Edge{0, 1});
  CHECK(g.edges[1] == Edge{1, 2});
  CHECK(g.labels == std::vector<int>{0, 1, 0});
  CHECK(g.features(2, 1) == 1.0);
}

TEST_CASE("graph bundle: errors name file and line") {
  TempDir dir("bundle_err");
  dir.write("features.csv", "1,0\n0,1\n1,1\n");
  dir.write("labels.csv", "0\n1\n0\n");
  dir.write("edges.tsv", "0\t1\n5 1\n");
  try {
    load_graph_bundle(dir.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.file().find("edges.tsv") != std::string::npos);
  }

  dir.write("edges.tsv", "0\t1\n1 x\n");
  CHECK_THROWS_AS(load_graph_bundle(dir.path), ParseError);

  dir.write("edges.tsv", "0\t1\n");
  dir.write("labels.csv", "0\n1\n");
  try {
    load_graph_bundle(dir.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file().find("labels.csv") != std::string::npos);
  }

  dir.write("labels.csv", "0\n1\n0\n");
  dir.write("features.csv", "1,0\n0\n1,1\n");
  try {
    load_graph_bundle(dir.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  dir.write("features.csv", "1,0\n0,1\n1,1\n");
  dir.write("edges.tsv", "1\t1\n");
  CHECK_THROWS_AS(load_graph_bundle(dir.path), ParseError);
  const Graph looped = load_graph_bundle(dir.path, GraphOptions{true});
  CHECK(looped.edges.size() == 1);

  dir.write("edges.tsv", "0\t1\n");
  dir.write("meta.json", R"({"n": 4})");
  CHECK_THROWS(load_graph_bundle(dir.path));

  CHECK_THROWS_AS(load_graph_bundle(dir.path / "missing"), ParseError);
}

TEST_CASE("graph bundle: write then load round trip") {
  TempDir dir("bundle_rt");
  const Graph g = generate_sbm(small_sbm(4));
  write_graph_bundle(dir.path, g, "sbm");
  const Graph back = load_graph_bundle(dir.path);
  CHECK(back.n == g.n);
  CHECK(back.edges == g.edges);
  CHECK(back.labels == g.labels);
  CHECK((back.features - g.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sbm: p_in=1, p_out=0 gives disjoint triangles") {
  SbmParams p;
  p.blocks = 2;
  p.per_block = 3;
  p.p_in = 1.0;
  p.p_out = 0.0;
  p.feature_dim = 2;
  const Graph g = generate_sbm(p);
  const std::vector<Edge> expected{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
  CHECK(g.edges == expected);
  CHECK(g.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("sbm: intra- and inter-block edge counts match binomial statistics") {
  SbmParams p;
  p.blocks = 3;
  p.per_block = 20;
  p.p_in = 0.1;
  p.p_out = 0.02;
  p.feature_dim = 3;
  const double intra_pairs = 3.0 * 20 * 19 / 2;
  const double inter_pairs = 3.0 * 20 * 20;
  const int trials = 200;
  double intra_sum = 0, inter_sum = 0;
  for (int s = 0; s < trials; ++s) {
    p.seed = static_cast<std::uint64_t>(s);
    const Graph g = generate_sbm(p);
    for (const Edge& e : g.edges) {
      if (g.labels[e.u] == g.labels[e.v]) {
        intra_sum += 1;
      } else {
        inter_sum += 1;
      }
    }
  }
  const auto within = [&](double sum, double pairs, double q) {
    const double mean = sum / trials;
    const double sigma = std::sqrt(pairs * q * (1 - q) / trials);
    return std::abs(mean - pairs * q) <= 3 * sigma;
  };
  CHECK(within(intra_sum, intra_pairs, p.p_in));
  CHECK(within(inter_sum, inter_pairs, p.p_out));
}

TEST_CASE("sbm: zero signal makes class means indistinguishable") {
  auto mean_p = [](double signal) {
    double total = 0;
    const int trials = 40;
    for (int s = 0; s < trials; ++s) {
      SbmParams p;
      p.blocks = 2;
      p.per_block = 50;
      p.feature_dim = 2;
      p.signal_strength = signal;
      p.seed = static_cast<std::uint64_t>(s);
      const Graph g = generate_sbm(p);
      std::vector<double> a, b;
      for (std::size_t i = 0; i < g.n; ++i) (g.labels[i] == 0 ? a : b).push_back(g.features(static_cast<Eigen::Index>(i), 0));
      auto moments = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double var = 0;
        for (double x : v) var += (x - m) * (x - m);
        return std::pair{m, var / static_cast<double>(v.size() - 1)};
      };
      const auto [ma, va] = moments(a);
      const auto [mb, vb] = moments(b);
      const double se2a = va / static_cast<double>(a.size());
      const double se2b = vb / static_cast<double>(b.size());
      const double t = (ma - mb) / std::sqrt(se2a + se2b);
      const double dof = (se2a + se2b) * (se2a + se2b) /
                         (se2a * se2a / static_cast<double>(a.size() - 1) +
                          se2b * se2b / static_cast<double>(b.size() - 1));
      total += t_two_sided_oracle(t, dof);
    }
    return total / trials;
  };
  CHECK(mean_p(0.0) > 0.01);
  CHECK(mean_p(1.5) < 0.01);
}

TEST_CASE("sbm: validation, determinism and spec strings") {
  SbmParams p = small_sbm();
  CHECK(generate_sbm(p).edges == generate_sbm(p).edges);
  CHECK(generate_sbm(p).features == generate_sbm(p).features);

  SbmParams bad = p;
  bad.per_block = 0;
  CHECK_THROWS_AS(generate_sbm(bad), std::invalid_argument);
  bad = p;
  bad.p_out = 0.5;
  CHECK_THROWS_AS(generate_sbm(bad), std::invalid_argument);
  bad.heterophilous = true;
  CHECK_NOTHROW(bad.validate());
  bad = p;
  bad.feature_dim = 2;
  CHECK_THROWS_AS(generate_sbm(bad), std::invalid_argument);

  const SbmParams d = parse_sbm_spec("default");
  CHECK(d.blocks == 3);
  CHECK(d.per_block == 100);
  CHECK(d.p_in == 0.1);
  CHECK(d.p_out == 0.02);
  const SbmParams h = parse_sbm_spec("hetero");
  CHECK(h.heterophilous);
  CHECK(h.p_in == 0.02);
  CHECK(h.p_out == 0.1);
  const SbmParams o = parse_sbm_spec("default,per_block=50,seed=3");
  CHECK(o.per_block == 50);
  CHECK(o.seed == 3);
  const SbmParams round = parse_sbm_spec(sbm_spec_string(o));
  CHECK(round.per_block == 50);
  CHECK(round.seed == 3);
  CHECK(round.signal_strength == o.signal_strength);
  CHECK_THROWS(parse_sbm_spec("default,bogus=1"));
  CHECK_THROWS(parse_sbm_spec("default,p_in=abc"));
}

TEST_CASE("split: sizes, stratification, disjointness and determinism") {
  std::vector<int> labels(150);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 3);
  const Split s = make_split(labels, 10, 0.35, 5);
  CHECK(s.train_idx.size() == 30);
  CHECK(s.val_idx.size() == 42);
  CHECK(s.test_idx.size() == 78);
  std::vector<int> per_class(3, 0);
  for (std::size_t i : s.train_idx) ++per_class[static_cast<std::size_t>(labels[i])];
  CHECK(per_class == std::vector<int>{10, 10, 10});

  std::set<std::size_t> all;
  for (const auto* part : {&s.train_idx, &s.val_idx, &s.test_idx}) {
    CHECK(std::is_sorted(part->begin(), part->end()));
    all.insert(part->begin(), part->end());
  }
  CHECK(all.size() == 150);

  const Split again = make_split(labels, 10, 0.35, 5);
  CHECK(again.train_idx == s.train_idx);
  CHECK(again.val_idx == s.val_idx);
  const Split other = make_split(labels, 10, 0.35, 6);
  CHECK(other.train_idx != s.train_idx);

  std::vector<int> small{0, 0, 1};
  CHECK_THROWS_AS(make_split(small, 2, 0.35, 0), std::invalid_argument);
}

TEST_CASE("correlate: examples") {
  const std::vector<double> xs{0.5, 1.0, 2.0, 3.5, 4.0, 7.0};
  std::vector<double> lin, ex;
  for (double x : xs) {
    lin.push_back(2 * x + 1);
    ex.push_back(std::exp(x));
  }
  const CorrelationReport a = correlate(xs, lin);
  CHECK(a.pearson_r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.spearman_rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.n_points == 6);

  const CorrelationReport b = correlate(xs, ex);
  CHECK(b.spearman_rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.pearson_r < 1.0);
  CHECK(b.fisher_ci_low <= b.pearson_r);
  CHECK(b.pearson_r <= b.fisher_ci_high);

  CHECK_THROWS_AS(correlate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(correlate(std::vector<double>{1, 1, 1, 1}, std::vector<double>{1, 2, 3, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(correlate(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3}),
                  std::invalid_argument);
}

TEST_CASE("correlate: hand dataset against the rank-difference formula") {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  const std::vector<double> ys{2, 1, 4, 3, 5};
  // With no ties rho = 1 - 6 sum d^2 / (n (n^2 - 1)); here d = (-1, 1, -1, 1, 0).
  double d2 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) d2 += (xs[i] - ys[i]) * (xs[i] - ys[i]);
  const double expected = 1 - 6 * d2 / (5.0 * 24.0);
  const CorrelationReport r = correlate(xs, ys);
  CHECK(r.spearman_rho == doctest::Approx(expected).epsilon(1e-12));
  CHECK(r.spearman_rho == doctest::Approx(0.8).epsilon(1e-12));
  const double z = std::atanh(r.pearson_r);
  CHECK(r.fisher_ci_low == doctest::Approx(std::tanh(z - 1.96 / std::sqrt(2.0))).epsilon(1e-12));
  CHECK(r.fisher_ci_high == doctest::Approx(std::tanh(z + 1.96 / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("correlate: average ranks for ties") {
  const std::vector<double> xs{3, 1, 3, 2};
  CHECK(average_ranks(xs) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("correlate: invariance under positive affine maps") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  std::vector<double> xs(40), ys(40);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = normal(rng);
    ys[i] = 0.5 * xs[i] + normal(rng);
  }
  const CorrelationReport base = correlate(xs, ys);
  CHECK(base.pearson_r >= -1.0);
  CHECK(base.pearson_r <= 1.0);
  std::vector<double> xa(xs), ya(ys);
  for (double& x : xa) x = 3 * x - 7;
  for (double& y : ya) y = 0.25 * y + 100;
  const CorrelationReport both = correlate(xa, ya);
  CHECK(both.pearson_r == doctest::Approx(base.pearson_r).epsilon(1e-10));
  CHECK(both.spearman_rho == doctest::Approx(base.spearman_rho).epsilon(1e-12));
  const CorrelationReport one = correlate(xa, ys);
  CHECK(one.spearman_rho == doctest::Approx(base.spearman_rho).epsilon(1e-12));
}

TEST_CASE("paired_test: examples") {
  const std::vector<double> base{0.1, 0.4, 0.3, 0.8};
  const PairedTest same = paired_test(base, base);
  CHECK(same.delta_mean == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(same.stars.empty());
  CHECK(same.degenerate);

  std::vector<double> shifted(base);
  for (double& v : shifted) v += 1.0;
  const PairedTest shift = paired_test(base, shifted);
  CHECK(shift.delta_mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shift.degenerate);
  CHECK(shift.p_value == 0.0);

  CHECK_THROWS_AS(paired_test(std::vector<double>{1}, std::vector<double>{2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(paired_test(std::vector<double>{1, 2}, std::vector<double>{2}),
                  std::invalid_argument);
}

TEST_CASE("paired_test: 10 samples against a numerically integrated t CDF") {
  const std::vector<double> base{0.71, 0.66, 0.74, 0.69, 0.70, 0.73, 0.65, 0.72, 0.68, 0.75};
  const std::vector<double> reg{0.73, 0.69, 0.74, 0.72, 0.71, 0.76, 0.66, 0.75, 0.70, 0.74};
  double mean = 0;
  std::vector<double> d(base.size());
  for (std::size_t i = 0; i < d.size(); ++i) mean += (d[i] = reg[i] - base[i]);
  mean /= 10;
  double var = 0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= 9;
  const double t = mean / std::sqrt(var / 10);

  const PairedTest r = paired_test(base, reg);
  CHECK(r.delta_mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(r.t_stat == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(t_two_sided_oracle(t, 9)).epsilon(1e-8));
  CHECK(!r.degenerate);
  CHECK(r.stars == significance_stars(r.p_value));

  for (double tt : {0.3, 1.0, 2.2, 4.5}) {
    for (double dof : {1.0, 3.0, 9.0, 30.0}) {
      CHECK(student_t_two_sided_p(tt, dof) == doctest::Approx(t_two_sided_oracle(tt, dof)).epsilon(1e-8));
    }
  }
}

TEST_CASE("significance stars and mean_ci95") {
  CHECK(significance_stars(0.2) == "");
  CHECK(significance_stars(0.04) == "*");
  CHECK(significance_stars(0.009) == "**");
  CHECK(significance_stars(0.0005) == "***");

  const std::vector<double> one{0.5};
  CHECK(mean_ci95(one).mean == 0.5);
  CHECK(mean_ci95(one).half_width == 0.0);
  // n = 4, sd = 1: half width is t_{0.975,3} / 2. t_{0.975,3} is where the
  // two-sided tail equals 0.05; bisect the oracle for it.
  const std::vector<double> four{1.0, 1.0 + 2.0 / std::sqrt(3.0), 1.0, 1.0 - 2.0 / std::sqrt(3.0)};
  double lo = 1, hi = 10;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_two_sided_oracle(mid, 3) > 0.05 ? lo : hi) = mid;
  }
  double sd = 0;
  for (double x : four) sd += (x - 1.0) * (x - 1.0);
  sd = std::sqrt(sd / 3);
  const MeanCi ci = mean_ci95(four);
  CHECK(ci.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ci.half_width == doctest::Approx(lo * sd / 2).epsilon(1e-7));
}

TEST_CASE("run_ordered emits in index order for any job count") {
  for (int jobs : {1, 2, 4}) {
    std::vector<std::size_t> seen;
    run_ordered<int>(
        25, jobs, [](std::size_t i) { return static_cast<int>(i * i); },
        [&](std::size_t i, int v) {
          CHECK(v == static_cast<int>(i * i));
          seen.push_back(i);
        });
    REQUIRE(seen.size() == 25);
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == i);
  }
}

TEST_CASE("derive_seed is deterministic and separates streams") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t b = 0; b < 4; ++b)
    for (std::uint64_t s = 0; s < 4; ++s)
      for (std::uint64_t salt = 0; salt < 4; ++salt) seeds.insert(derive_seed(b, s, salt));
  CHECK(seeds.size() == 64);
}

TEST_CASE("manifest and key=value files") {
  TempDir dir("manifest");
  write_manifest(dir.path, {{"command", "sweep"}, {"seed", "3"}});
  std::ifstream in(dir.path / "manifest.txt");
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1 == "command=sweep");
  CHECK(l2 == "seed=3");
  CHECK(l3.rfind("timestamp=", 0) == 0);

  dir.write("cfg.txt", "# comment\norder = 4\nbasis=legendre\n\n");
  const auto kv = read_key_value_file(dir.path / "cfg.txt");
  CHECK(kv.at("order") == "4");
  CHECK(kv.at("basis") == "legendre");
  CHECK(kv.size() == 2);
  dir.write("bad.txt", "order\n");
  CHECK_THROWS_AS(read_key_value_file(dir.path / "bad.txt"), ParseError);
}

namespace {

Dataset small_dataset() { return prepare_dataset("small", generate_sbm(small_sbm(1))); }

SweepSpec small_sweep(const Dataset& data) {
  SweepSpec spec;
  spec.datasets = {&data};
  spec.bases = {Basis{BasisKind::Chebyshev, false}};
  spec.orders = {1, 2};
  spec.layers = {1};
  spec.seeds = 1;
  spec.base_seed = 9;
  spec.model.activation = Activation::Relu;
  spec.train.max_epochs = 40;
  spec.train.patience = 20;
  spec.per_class = 5;
  return spec;
}

}  // namespace

TEST_CASE("sweep: row count, streaming, reproducibility") {
  const Dataset data = small_dataset();
  SweepSpec spec = small_sweep(data);
  CHECK(spec.row_count() == 2);
  std::vector<int> streamed;
  const std::vector<SweepRow> rows = run_sweep(spec, [&](const SweepRow& r) { streamed.push_back(r.order); });
  REQUIRE(rows.size() == 2);
  CHECK(streamed == std::vector<int>{1, 2});
  for (const SweepRow& r : rows) {
    CHECK(r.ok());
    CHECK(r.nodes == data.graph.n);
    CHECK(std::isfinite(r.ftgc_nonlinear));
    CHECK(r.ftgc_nonlinear >= 0);
    CHECK(r.ftgc_linear >= 0);
    CHECK(r.true_jacobian <= r.jacobian_bound * (1 + 1e-9));
    CHECK(r.gap == doctest::Approx(r.test_loss - r.train_loss).epsilon(1e-12));
    CHECK(std::abs(r.weight_term * r.spectral_term - r.ftgc_nonlinear) <= 1e-12 * r.ftgc_nonlinear);
  }
  // Rows sharing a seed index share their split.
  CHECK(rows[0].split_seed == rows[1].split_seed);

  const SweepRow again = run_sweep_row(spec, 1);
  CHECK(sweep_csv_row(again) == sweep_csv_row(rows[1]));

  spec.jobs = 2;
  const std::vector<SweepRow> parallel = run_sweep(spec);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(sweep_csv_row(parallel[i]) == sweep_csv_row(rows[i]));

  const auto count_commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(count_commas(sweep_csv_header()) == count_commas(sweep_csv_row(rows[0])));
}

TEST_CASE("sweep: failures are recorded in-row and summarised") {
  const Dataset data = small_dataset();
  SweepSpec spec = small_sweep(data);
  spec.per_class = 500;  // more than any class holds
  const std::vector<SweepRow> rows = run_sweep(spec);
  REQUIRE(rows.size() == 2);
  for (const SweepRow& r : rows) CHECK(r.status.rfind("error: ", 0) == 0);
  const SweepSummary s = summarize_sweep(rows);
  CHECK(s.rows_ok == 0);
  CHECK(s.rows_failed == 2);
  CHECK(!s.gap_vs_ftgc_nonlinear.has_value());
}

TEST_CASE("sweep summary on several orders") {
  const Dataset data = small_dataset();
  SweepSpec spec = small_sweep(data);
  spec.orders = {1, 2, 3, 4, 5};
  const std::vector<SweepRow> rows = run_sweep(spec);
  const SweepSummary s = summarize_sweep(rows);
  CHECK(s.rows_ok == 5);
  CHECK(s.jacobian_violations == 0);
  CHECK(s.ordering_violations == 0);
  CHECK(s.max_decomposition_error <= 1e-12);
  REQUIRE(s.gap_vs_ftgc_nonlinear.has_value());
  CHECK(s.gap_vs_ftgc_nonlinear->n_points == 5);
}

TEST_CASE("hyperparameter grid sampling") {
  const HyperGrid grid;
  CHECK(grid.size() == 6 * 8 * 5 * 5 * 5);
  const auto a = grid.sample(20, 3);
  CHECK(a.size() == 20);
  CHECK(a == grid.sample(20, 3));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) CHECK(!(a[i] == a[j]));
}

TEST_CASE("ablation: lambda grid {0} gives identical columns") {
  const Dataset data = small_dataset();
  AblationSpec spec;
  spec.dataset = &data;
  spec.bases = {Basis{BasisKind::Chebyshev, false}, Basis{BasisKind::Monomial, false}};
  spec.seeds = 3;
  spec.model.order = 3;
  spec.train.max_epochs = 30;
  spec.train.patience = 15;
  spec.lambda_grid = {0.0};
  spec.per_class = 5;
  const std::vector<AblationRow> rows = run_ablation(spec);
  REQUIRE(rows.size() == 2);
  for (const AblationRow& r : rows) {
    CHECK(r.base_acc == r.reg_acc);
    CHECK(r.base_gap == r.reg_gap);
    CHECK(r.reg_lambda == 0.0);
    CHECK(r.acc_test.delta_mean == 0.0);
    CHECK(r.gap_test.delta_mean == 0.0);
    CHECK(r.gap_test.p_value == 1.0);
    CHECK(r.base_acc.size() == 3);
    CHECK(ablation_csv_rows(r).size() == 3);
  }
  CHECK(rows[0].basis.kind == BasisKind::Chebyshev);
  CHECK(rows[1].basis.kind == BasisKind::Monomial);

  spec.seeds = 1;
  CHECK_THROWS_AS(run_ablation(spec), std::invalid_argument);
}

TEST_CASE("ablation: regularised search never picks a worse validation score") {
  const Dataset data = small_dataset();
  AblationSpec spec;
  spec.dataset = &data;
  spec.bases = {Basis{BasisKind::Chebyshev, false}};
  spec.seeds = 2;
  spec.model.order = 3;
  spec.train.max_epochs = 30;
  spec.train.patience = 15;
  spec.lambda_grid = {0.1, 1.0};
  spec.per_class = 5;
  const std::vector<AblationRow> rows = run_ablation(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].candidates == 3);
  for (double l : {0.0, 0.1, 1.0}) {
    if (rows[0].reg_lambda == l) return;
  }
  FAIL("reg lambda not from the grid");
}
