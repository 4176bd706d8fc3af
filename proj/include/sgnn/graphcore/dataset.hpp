#pragma once

#include <string>

#include "sgnn/graphcore/graph.hpp"
#include "sgnn/graphcore/spectral.hpp"

namespace sgnn {

/// A graph together with its (shared, read-only) spectral decomposition.
struct Dataset {
  std::string name;
  Graph graph;
  SpectralDecomposition decomp;
};

inline Dataset prepare_dataset(std::string name, Graph graph) {
  Dataset d;
  d.name = std::move(name);
  d.decomp = eigendecompose(build_normalized_adjacency(graph));
  d.graph = std::move(graph);
  return d;
}

}  // namespace sgnn
