#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sgnn {

/// Transductive node partition. Index lists are sorted ascending.
struct Split {
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  std::vector<std::size_t> test_idx;
  std::uint64_t seed = 0;
};

/// Stratified split: `per_class` training nodes drawn from every class, the
/// remainder shuffled and divided floor(val_frac * rest) / rest for val/test.
/// Throws std::invalid_argument when a class has fewer than `per_class` nodes.
Split make_split(std::span<const int> labels, int per_class = 10, double val_frac = 0.35,
                 std::uint64_t seed = 0);

}  // namespace sgnn
