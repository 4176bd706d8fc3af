#include "sgnn/graphcore/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgnn {

int Graph::num_classes() const {
  int c = 0;
  for (int y : labels) c = std::max(c, y + 1);
  return c;
}

void Graph::validate() const {
  if (n == 0) throw std::invalid_argument("graph has no nodes");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u >= n || e.v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") out of range for n=" + std::to_string(n));
    }
    if (e.u > e.v) throw std::invalid_argument("edge not canonical (u > v)");
    if (e.u == e.v && !allow_self_loops) {
      throw std::invalid_argument("self-loop at node " + std::to_string(e.u) +
                                  " (enable allow_self_loops to permit)");
    }
    if (i > 0 && !(edges[i - 1] < e)) throw std::invalid_argument("edge list not sorted/unique");
  }
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw std::invalid_argument("features have " + std::to_string(features.rows()) +
                                " rows, expected " + std::to_string(n));
  }
  if (!labels.empty() && labels.size() != n) {
    throw std::invalid_argument("labels have length " + std::to_string(labels.size()) +
                                ", expected " + std::to_string(n));
  }
  for (int y : labels) {
    if (y < 0) throw std::invalid_argument("negative class label");
  }
}

Graph make_graph(std::size_t n, std::vector<Edge> edges, Eigen::MatrixXd features,
                 std::vector<int> labels, GraphOptions options) {
  if (n == 0) throw std::invalid_argument("graph has no nodes");
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") out of range for n=" + std::to_string(n));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.features = std::move(features);
  g.labels = std::move(labels);
  g.allow_self_loops = options.allow_self_loops;
  g.validate();
  return g;
}

std::vector<double> degrees(const Graph& graph) {
  std::vector<double> deg(graph.n, 0.0);
  for (const Edge& e : graph.edges) {
    if (e.u == e.v) {
      deg[e.u] += 1.0;
    } else {
      deg[e.u] += 1.0;
      deg[e.v] += 1.0;
    }
  }
  return deg;
}

Eigen::MatrixXd build_normalized_adjacency(const Graph& graph) {
  if (graph.n == 0) throw std::invalid_argument("graph has no nodes");
  for (const Edge& e : graph.edges) {
    if (e.u >= graph.n || e.v >= graph.n) throw std::invalid_argument("edge index out of range");
    if (e.u == e.v && !graph.allow_self_loops) throw std::invalid_argument("self-loop not permitted");
  }
  const std::vector<double> deg = degrees(graph);
  std::vector<double> inv_sqrt(graph.n, 0.0);
  for (std::size_t i = 0; i < graph.n; ++i) {
    if (deg[i] > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
  }
  const auto n = static_cast<Eigen::Index>(graph.n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : graph.edges) {
    const double w = inv_sqrt[e.u] * inv_sqrt[e.v];
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    a(u, v) = w;
    a(v, u) = w;
  }
  return a;
}

}  // namespace sgnn
