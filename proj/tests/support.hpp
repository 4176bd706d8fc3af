#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgnn/graphcore/graph.hpp"

namespace sgnn::test {

inline Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// Erdos-Renyi graph with Gaussian features and round-robin labels.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng, int dim = 3,
                          int classes = 2) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j});
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(classes));
  return make_graph(n, std::move(edges), normal_matrix(static_cast<Eigen::Index>(n), dim, rng),
                    std::move(labels));
}

inline Graph path3() {
  return make_graph(3, {{0, 1}, {1, 2}}, Eigen::MatrixXd::Zero(3, 2), {0, 1, 0});
}

}  // namespace sgnn::test
