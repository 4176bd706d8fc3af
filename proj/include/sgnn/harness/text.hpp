#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sgnn {

/// Flat key=value file: one pair per line, '#' starts a comment line.
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);

/// Writes `manifest.txt` in `dir`: the given entries in order, then a
/// `timestamp=` line (the only non-deterministic content of any run).
void write_manifest(const std::filesystem::path& dir,
                    const std::vector<std::pair<std::string, std::string>>& entries);

/// Deterministic 64-bit mix from a base seed and a stream id (SplitMix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t salt = 0);

std::string join(const std::vector<std::string>& items, const std::string& sep);

}  // namespace sgnn
