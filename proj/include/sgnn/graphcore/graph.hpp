#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sgnn {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct GraphOptions {
  bool allow_self_loops = false;
};

/// Undirected node-attributed graph. Edges are stored canonically (u <= v),
/// sorted and unique.
struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;
  Eigen::MatrixXd features;  // n x d0
  std::vector<int> labels;   // length n, values in [0, C)
  bool allow_self_loops = false;

  int num_classes() const;
  std::size_t feature_dim() const { return static_cast<std::size_t>(features.cols()); }

  /// Throws std::invalid_argument when any structural invariant is broken.
  void validate() const;
};

/// Builds a Graph from an arbitrary edge list: endpoints are canonicalised,
/// duplicates (in either orientation) merged, and invariants checked.
Graph make_graph(std::size_t n, std::vector<Edge> edges, Eigen::MatrixXd features,
                 std::vector<int> labels, GraphOptions options = {});

std::vector<double> degrees(const Graph& graph);

/// D^{-1/2} A D^{-1/2}. Degree-0 nodes get a zero row and column.
Eigen::MatrixXd build_normalized_adjacency(const Graph& graph);

}  // namespace sgnn
