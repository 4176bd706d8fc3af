#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sgnn/specnet/model.hpp"

namespace sgnn {

// Text checkpoint, one record per line:
//
//   sgnn-checkpoint 1
//   config <key>=<value> ...        (every ModelConfig field, including seed)
//   adam_step <int>
//   tensor <name> <rows> <cols>      followed by <rows> lines of <cols> values
//   ...
//   end
//
// Tensors are written row-major as shortest round-trip decimal doubles, so a
// save/load cycle is bit-exact. Names: w_in, theta<l>, w_mid<l>, w_out, and
// the same names prefixed with adam.m. / adam.v. for the optimizer moments.
// Thetas are stored as (K+1) x 1.

void write_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams read_checkpoint(std::istream& in, const std::string& source = "<stream>");

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

/// space-separated key=value rendering of a ModelConfig (fixed key order).
std::string config_to_string(const ModelConfig& config);

}  // namespace sgnn
