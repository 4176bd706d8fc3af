#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgnn/graphcore/dataset.hpp"
#include "sgnn/polybasis/basis.hpp"

namespace sgnn::cli {

/// Bad flag value or config entry: exit status 1, nothing written.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved key=value settings of one command. Lookup order: explicit flag,
/// then --config file, then the command's default.
class Settings {
 public:
  Settings(std::string command, std::map<std::string, std::string> defaults);

  void set_flag(const std::string& key, const std::string& value);
  /// Reads the config file; keys must be known to this command.
  void load_config(const std::string& path);

  const std::string& command() const { return command_; }
  std::string str(const std::string& key) const;
  bool has(const std::string& key) const { return !str(key).empty(); }
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;

  /// Every known key with its resolved value, sorted by key.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::string command_;
  std::map<std::string, std::string> defaults_;
  std::map<std::string, std::string> config_;
  std::map<std::string, std::string> flags_;
};

/// "1..10", "3", or "1,2,5".
std::vector<int> parse_int_list(const std::string& text, const std::string& key);
std::vector<double> parse_real_list(const std::string& text, const std::string& key);
/// "all" or a comma-separated list of basis names; `rescaled` applies to every entry.
std::vector<Basis> parse_bases(const std::string& text, bool rescaled);

/// --graph bundle when given, else the --sbm preset (seeded from --seed
/// unless the preset names its own seed).
Dataset resolve_dataset(const Settings& s);

}  // namespace sgnn::cli
