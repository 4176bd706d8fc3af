#pragma once

#include <filesystem>

#include "sgnn/graphcore/graph.hpp"

namespace sgnn {

/// Reads a graph bundle directory:
///   edges.tsv     one "u<TAB>v" pair per line, 0-indexed (either orientation)
///   features.csv  n rows of comma-separated doubles
///   labels.csv    n lines, one integer class per line
///   meta.json     optional {"n", "d0", "C", "name"}, checked when present
/// Blank lines and lines starting with '#' are ignored. Duplicate edges are
/// merged. Errors are ParseError naming the file and line.
Graph load_graph_bundle(const std::filesystem::path& dir, GraphOptions options = {});

/// Writes edges.tsv, features.csv, labels.csv and meta.json.
void write_graph_bundle(const std::filesystem::path& dir, const Graph& graph,
                        const std::string& name = "graph");

}  // namespace sgnn
