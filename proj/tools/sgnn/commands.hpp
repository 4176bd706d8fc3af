#pragma once

#include <filesystem>
#include <optional>

#include "settings.hpp"

namespace sgnn::cli {

/// Output directory; nothing is written when unset.
using OutDir = std::optional<std::filesystem::path>;

int run_profile(const Settings& s, const OutDir& out);
int run_bounds(const Settings& s, const OutDir& out);
int run_train(const Settings& s, const OutDir& out);
int run_sweep_command(const Settings& s, const OutDir& out);
int run_ablate(const Settings& s, const OutDir& out);
int run_jacobian(const Settings& s, const OutDir& out);
int run_selftest_command(const Settings& s, const OutDir& out);

}  // namespace sgnn::cli
