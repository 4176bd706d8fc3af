#include "sgnn/harness/bundle.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgnn/errors.hpp"
#include "sgnn/format.hpp"

namespace sgnn {
namespace {

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::ifstream open(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError(p.string(), 0, "cannot open file");
  return in;
}

Eigen::MatrixXd read_features(const std::filesystem::path& p) {
  std::ifstream in = open(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(parse_double(trim(cell)));
      } catch (const std::exception& e) {
        throw ParseError(p.string(), lineno, e.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(p.string(), lineno,
                       "expected " + std::to_string(rows.front().size()) + " columns, got " +
                           std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(p.string(), lineno, "no feature rows");
  Eigen::MatrixXd f(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return f;
}

std::vector<int> read_labels(const std::filesystem::path& p, std::size_t n) {
  std::ifstream in = open(p);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    int y = 0;
    try {
      y = parse_int<int>(trim(line));
    } catch (const std::exception& e) {
      throw ParseError(p.string(), lineno, e.what());
    }
    if (y < 0) throw ParseError(p.string(), lineno, "negative class label");
    labels.push_back(y);
  }
  if (labels.size() != n) {
    throw ParseError(p.string(), lineno,
                     "found " + std::to_string(labels.size()) + " labels, features have " +
                         std::to_string(n) + " rows");
  }
  return labels;
}

std::vector<Edge> read_edges(const std::filesystem::path& p, std::size_t n, bool allow_loops) {
  std::ifstream in = open(p);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra)) {
      throw ParseError(p.string(), lineno, "expected two node indices");
    }
    std::size_t u = 0, v = 0;
    try {
      u = parse_int<std::size_t>(a);
      v = parse_int<std::size_t>(b);
    } catch (const std::exception& e) {
      throw ParseError(p.string(), lineno, e.what());
    }
    if (u >= n || v >= n) {
      throw ParseError(p.string(), lineno,
                       "edge (" + a + "," + b + ") out of range for n=" + std::to_string(n));
    }
    if (u == v && !allow_loops) throw ParseError(p.string(), lineno, "self-loop not permitted");
    edges.push_back({u, v});
  }
  return edges;
}

}  // namespace

Graph load_graph_bundle(const std::filesystem::path& dir, GraphOptions options) {
  if (!std::filesystem::is_directory(dir)) {
    throw ParseError(dir.string(), 0, "graph bundle directory not found");
  }
  Eigen::MatrixXd features = read_features(dir / "features.csv");
  const auto n = static_cast<std::size_t>(features.rows());
  std::vector<int> labels = read_labels(dir / "labels.csv", n);
  std::vector<Edge> edges = read_edges(dir / "edges.tsv", n, options.allow_self_loops);

  const auto meta_path = dir / "meta.json";
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    nlohmann::json meta;
    try {
      in >> meta;
    } catch (const std::exception& e) {
      throw ParseError(meta_path.string(), 0, e.what());
    }
    if (meta.contains("n") && meta["n"].get<std::size_t>() != n) {
      throw ParseError(meta_path.string(), 0, "meta n disagrees with features.csv");
    }
    if (meta.contains("d0") &&
        meta["d0"].get<std::size_t>() != static_cast<std::size_t>(features.cols())) {
      throw ParseError(meta_path.string(), 0, "meta d0 disagrees with features.csv");
    }
    if (meta.contains("C")) {
      const int c = meta["C"].get<int>();
      for (int y : labels) {
        if (y >= c) throw ParseError(meta_path.string(), 0, "label exceeds meta C");
      }
    }
  }
  return make_graph(n, std::move(edges), std::move(features), std::move(labels), options);
}

void write_graph_bundle(const std::filesystem::path& dir, const Graph& graph,
                        const std::string& name) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "edges.tsv");
    for (const Edge& e : graph.edges) out << e.u << '\t' << e.v << '\n';
  }
  {
    std::ofstream out(dir / "features.csv");
    for (Eigen::Index i = 0; i < graph.features.rows(); ++i) {
      for (Eigen::Index j = 0; j < graph.features.cols(); ++j) {
        if (j > 0) out << ',';
        out << format_double(graph.features(i, j));
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "labels.csv");
    for (int y : graph.labels) out << y << '\n';
  }
  nlohmann::json meta{{"n", graph.n},
                      {"d0", graph.features.cols()},
                      {"C", graph.num_classes()},
                      {"name", name}};
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';
}

}  // namespace sgnn
