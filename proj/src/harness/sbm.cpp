#include "sgnn/harness/sbm.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

#include "sgnn/format.hpp"

namespace sgnn {

void SbmParams::validate() const {
  if (blocks < 1 || per_block < 1) throw std::invalid_argument("SBM needs non-empty blocks");
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
    throw std::invalid_argument("SBM probabilities must lie in [0, 1]");
  }
  if (!heterophilous && p_out > p_in) {
    throw std::invalid_argument("homophilous SBM requires p_out <= p_in");
  }
  if (heterophilous && p_in > p_out) {
    throw std::invalid_argument("heterophilous SBM requires p_in <= p_out");
  }
  if (feature_dim < blocks) {
    throw std::invalid_argument("feature_dim must be >= blocks for orthogonal class means");
  }
}

Graph generate_sbm(const SbmParams& params) {
  params.validate();
  const std::size_t n = static_cast<std::size_t>(params.blocks) * params.per_block;
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / params.per_block);

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? params.p_in : params.p_out;
      if (unit(rng) < p) edges.push_back({i, j});
    }
  }

  std::normal_distribution<double> noise;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), params.feature_dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = noise(rng);
    x(i, labels[static_cast<std::size_t>(i)]) += params.signal_strength;
  }
  return make_graph(n, std::move(edges), std::move(x), std::move(labels));
}

SbmParams parse_sbm_spec(std::string_view spec) {
  SbmParams p;
  std::stringstream ss{std::string(spec)};
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      if (!first) throw std::invalid_argument("SBM preset '" + item + "' must come first");
      if (item == "default") {
        p = SbmParams{};
      } else if (item == "hetero") {
        p = SbmParams{};
        std::swap(p.p_in, p.p_out);
        p.heterophilous = true;
      } else {
        throw std::invalid_argument("unknown SBM preset '" + item + "'");
      }
      first = false;
      continue;
    }
    first = false;
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "blocks") p.blocks = parse_int<int>(value);
    else if (key == "per_block") p.per_block = parse_int<int>(value);
    else if (key == "p_in") p.p_in = parse_double(value);
    else if (key == "p_out") p.p_out = parse_double(value);
    else if (key == "heterophilous") p.heterophilous = parse_int<int>(value) != 0;
    else if (key == "feature_dim") p.feature_dim = parse_int<int>(value);
    else if (key == "signal") p.signal_strength = parse_double(value);
    else if (key == "signal_strength") p.signal_strength = parse_double(value);
    else if (key == "seed") p.seed = parse_int<std::uint64_t>(value);
    else throw std::invalid_argument("unknown SBM parameter '" + key + "'");
  }
  p.validate();
  return p;
}

std::string sbm_spec_string(const SbmParams& p) {
  std::ostringstream ss;
  ss << "blocks=" << p.blocks << ",per_block=" << p.per_block << ",p_in=" << format_double(p.p_in)
     << ",p_out=" << format_double(p.p_out) << ",heterophilous=" << (p.heterophilous ? 1 : 0)
     << ",feature_dim=" << p.feature_dim << ",signal_strength=" << format_double(p.signal_strength)
     << ",seed=" << p.seed;
  return ss.str();
}

}  // namespace sgnn
