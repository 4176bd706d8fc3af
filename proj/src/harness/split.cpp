#include "sgnn/harness/split.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace sgnn {

Split make_split(std::span<const int> labels, int per_class, double val_frac, std::uint64_t seed) {
  if (per_class < 1) throw std::invalid_argument("per_class must be >= 1");
  if (!(val_frac >= 0.0 && val_frac <= 1.0)) throw std::invalid_argument("val_frac must be in [0,1]");
  int classes = 0;
  for (int y : labels) {
    if (y < 0) throw std::invalid_argument("negative label");
    classes = std::max(classes, y + 1);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  Split s;
  s.seed = seed;
  std::vector<char> taken(labels.size(), 0);
  for (int c = 0; c < classes; ++c) {
    auto& members = by_class[c];
    if (static_cast<int>(members.size()) < per_class) {
      throw std::invalid_argument("class " + std::to_string(c) + " has " +
                                  std::to_string(members.size()) + " nodes, need " +
                                  std::to_string(per_class));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (int k = 0; k < per_class; ++k) {
      s.train_idx.push_back(members[k]);
      taken[members[k]] = 1;
    }
  }

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!taken[i]) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  const auto n_val = static_cast<std::size_t>(std::floor(val_frac * static_cast<double>(rest.size()) + 1e-9));
  s.val_idx.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_val));
  s.test_idx.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_val), rest.end());

  std::sort(s.train_idx.begin(), s.train_idx.end());
  std::sort(s.val_idx.begin(), s.val_idx.end());
  std::sort(s.test_idx.begin(), s.test_idx.end());
  return s;
}

}  // namespace sgnn
