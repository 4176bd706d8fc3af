#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sgnn/graphcore/graph.hpp"

namespace sgnn {

/// Stochastic block model with Gaussian class-mean features.
struct SbmParams {
  int blocks = 3;
  int per_block = 100;
  double p_in = 0.1;
  double p_out = 0.02;
  bool heterophilous = false;  // requires p_in <= p_out instead of p_out <= p_in
  int feature_dim = 16;
  double signal_strength = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Nodes are grouped contiguously by block (node i has label i / per_block).
/// Each pair is an edge independently with p_in (same block) or p_out.
/// Features: signal_strength * e_label + N(0, I). Deterministic per seed.
Graph generate_sbm(const SbmParams& params);

/// "default" (homophilous), "hetero" (p_in and p_out swapped), optionally
/// followed by comma-separated overrides, e.g. "default,per_block=50,seed=3",
/// or just the overrides ("blocks=2,p_in=0.2").
SbmParams parse_sbm_spec(std::string_view spec);
std::string sbm_spec_string(const SbmParams& params);

}  // namespace sgnn
