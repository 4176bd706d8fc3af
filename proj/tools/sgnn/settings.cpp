#include "settings.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "sgnn/errors.hpp"
#include "sgnn/format.hpp"
#include "sgnn/harness/bundle.hpp"
#include "sgnn/harness/sbm.hpp"
#include "sgnn/harness/text.hpp"

namespace sgnn::cli {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Settings::Settings(std::string command, std::map<std::string, std::string> defaults)
    : command_(std::move(command)), defaults_(std::move(defaults)) {}

void Settings::set_flag(const std::string& key, const std::string& value) {
  if (!defaults_.count(key)) throw UsageError("--" + key + " is not valid for " + command_);
  flags_[key] = value;
}

void Settings::load_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  try {
    kv = read_key_value_file(path);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  } catch (const std::exception& e) {
    throw UsageError("cannot read config " + path + ": " + e.what());
  }
  for (const auto& [k, v] : kv) {
    if (!defaults_.count(k)) throw UsageError(path + ": unknown key '" + k + "' for " + command_);
    if (k == "out" || k == "config") throw UsageError(path + ": '" + k + "' must be given as a flag");
    config_[k] = v;
  }
}

std::string Settings::str(const std::string& key) const {
  if (auto it = flags_.find(key); it != flags_.end()) return it->second;
  if (auto it = config_.find(key); it != config_.end()) return it->second;
  if (auto it = defaults_.find(key); it != defaults_.end()) return it->second;
  throw std::logic_error("unregistered setting " + key);
}

double Settings::real(const std::string& key) const {
  const std::string v = str(key);
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a number, got '" + v + "'");
  }
}

int Settings::integer(const std::string& key) const {
  const std::string v = str(key);
  try {
    return parse_int<int>(v);
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected an integer, got '" + v + "'");
  }
}

std::uint64_t Settings::u64(const std::string& key) const {
  const std::string v = str(key);
  try {
    return parse_int<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a non-negative integer, got '" + v + "'");
  }
}

bool Settings::flag(const std::string& key) const {
  const std::string v = lower(str(key));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off" || v.empty()) return false;
  throw UsageError("--" + key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::pair<std::string, std::string>> Settings::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : defaults_) {
    if (k == "config") continue;
    out.emplace_back(k, str(k));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
  std::vector<int> out;
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const int lo = parse_int<int>(text.substr(0, dots));
      const int hi = parse_int<int>(text.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty range");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      for (const std::string& item : split_list(text)) out.push_back(parse_int<int>(item));
    }
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected N, A..B or a comma list, got '" + text + "'");
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  try {
    for (const std::string& item : split_list(text)) out.push_back(parse_double(item));
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a comma list of numbers, got '" + text + "'");
  }
  return out;
}

std::vector<Basis> parse_bases(const std::string& text, bool rescaled) {
  std::vector<Basis> out;
  if (lower(text) == "all") {
    for (BasisKind k : kAllBases) out.push_back({k, rescaled});
    return out;
  }
  for (const std::string& item : split_list(text)) {
    try {
      out.push_back({parse_basis_kind(item), rescaled});
    } catch (const std::exception&) {
      throw UsageError("--basis: unknown basis '" + item + "'");
    }
  }
  return out;
}

Dataset resolve_dataset(const Settings& s) {
  if (s.has("graph")) {
    const std::filesystem::path dir = s.str("graph");
    GraphOptions opts;
    opts.allow_self_loops = s.flag("self-loops");
    std::string name = dir.filename().string();
    if (name.empty()) name = dir.parent_path().filename().string();
    return prepare_dataset(name, load_graph_bundle(dir, opts));
  }
  const std::string spec = s.str("sbm");
  SbmParams params;
  try {
    params = parse_sbm_spec(spec);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--sbm: ") + e.what());
  }
  if (spec.find("seed=") == std::string::npos) params.seed = derive_seed(s.u64("seed"), 0, 3);
  return prepare_dataset("sbm", generate_sbm(params));
}

}  // namespace sgnn::cli
