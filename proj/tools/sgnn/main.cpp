#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "sgnn/format.hpp"
#include "sgnn/harness/ablation.hpp"
#include "settings.hpp"

namespace {

using Defaults = std::map<std::string, std::string>;
using sgnn::cli::OutDir;
using sgnn::cli::Settings;

// Keys that are switches (no value) on the command line.
const std::vector<std::string> kSwitches{"rescaled", "self-loops", "clip-logits"};

Defaults merge(std::initializer_list<Defaults> parts) {
  Defaults out;
  for (const Defaults& p : parts)
    for (const auto& [k, v] : p) out[k] = v;
  return out;
}

const Defaults kCommon{{"seed", "0"}, {"graph", ""}, {"sbm", "default"}, {"self-loops", "0"},
                       {"jobs", "1"}};
const Defaults kModel{{"basis", "chebyshev"},  {"rescaled", "0"},   {"order", "10"},
                      {"layers", "1"},         {"activation", "identity"},
                      {"hidden", "16"},        {"dropout1", "0"},   {"dropout2", "0"},
                      {"lambda-ew", "0"},      {"reg-target", "filter_input"},
                      {"clip-logits", "0"},    {"logit-bound", "50"}};
const Defaults kTrain{{"lr", "0.01"},      {"weight-decay", "1e-05"}, {"epochs", "500"},
                      {"patience", "100"}, {"per-class", "10"},       {"val-frac", "0.35"}};
const Defaults kBound{{"delta", "0.05"},        {"c1", "1"}, {"c2", "1"},
                      {"jacobian-tol", "1e-06"}, {"jacobian-max-iter", "1000"}};

std::string lambda_list() {
  std::string out;
  for (double l : sgnn::kDefaultLambdaGrid) {
    if (!out.empty()) out += ',';
    out += sgnn::format_double(l);
  }
  return out;
}

struct Command {
  std::string name;
  std::string help;
  Defaults defaults;
  int (*run)(const Settings&, const OutDir&);
};

std::vector<Command> commands() {
  return {
      {"profile", "amplification profile table M_K(x) per basis",
       {{"basis", "all"}, {"order", "10"}, {"rescaled", "0"}, {"points", "2001"}, {"seed", "0"}},
       sgnn::cli::run_profile},
      {"bounds", "train one model (or load --checkpoint) and report every bound",
       merge({kCommon, kModel, kTrain, kBound, {{"checkpoint", ""}, {"depth", "0"}}}),
       sgnn::cli::run_bounds},
      {"train", "train one model and save its checkpoint",
       merge({kCommon, kModel, kTrain}), sgnn::cli::run_train},
      {"sweep", "bound-versus-gap sweep over bases, orders, depths and seeds",
       merge({kCommon, kModel, kTrain, kBound,
              {{"basis", "all"}, {"orders", "1..10"}, {"layers", "2"}, {"activation", "relu"},
               {"seeds", "10"}}}),
       sgnn::cli::run_sweep_command},
      {"ablate", "regulariser ablation: base and regularised searches per basis",
       merge({kCommon, kModel, kTrain,
              {{"basis", "all"}, {"seeds", "10"}, {"lambdas", lambda_list()}, {"trials", "0"}}}),
       sgnn::cli::run_ablate},
      {"jacobian", "power-iteration Jacobian norm against its bound on trained models",
       merge({kCommon, kModel, kTrain, kBound,
              {{"seeds", "5"}, {"layers", "2"}, {"activation", "relu"},
               {"jacobian-tol", "1e-10"}, {"jacobian-max-iter", "20000"}}}),
       sgnn::cli::run_jacobian},
      {"selftest", "run the invariant suites", {{"seed", "0"}},
       sgnn::cli::run_selftest_command},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral graph filter workbench"};
  app.require_subcommand(1);
  const std::vector<Command> cmds = commands();

  struct Bound {
    CLI::App* sub;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
    std::map<std::string, CLI::Option*> options;
    std::string out;
    std::string config;
  };
  std::vector<Bound> bound(cmds.size());
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    Bound& b = bound[c];
    b.sub = app.add_subcommand(cmds[c].name, cmds[c].help);
    b.sub->add_option("--out", b.out, "output directory (nothing is written without it)");
    b.sub->add_option("--config", b.config, "key=value file; explicit flags take precedence");
    for (const auto& [key, def] : cmds[c].defaults) {
      const bool is_switch =
          std::find(kSwitches.begin(), kSwitches.end(), key) != kSwitches.end();
      if (is_switch) {
        b.options[key] = b.sub->add_flag("--" + key, b.switches[key]);
      } else {
        const std::string names = key == "basis" ? "--basis,--bases" : "--" + key;
        b.options[key] =
            b.sub->add_option(names, b.values[key], def.empty() ? "" : "default " + def);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (std::size_t c = 0; c < cmds.size(); ++c) {
    Bound& b = bound[c];
    if (!b.sub->parsed()) continue;
    try {
      Settings s(cmds[c].name, cmds[c].defaults);
      if (!b.config.empty()) s.load_config(b.config);
      for (const auto& [key, opt] : b.options) {
        if (opt->count() == 0) continue;
        if (b.switches.count(key)) {
          s.set_flag(key, b.switches[key] ? "1" : "0");
        } else {
          s.set_flag(key, b.values[key]);
        }
      }
      OutDir out;
      if (!b.out.empty()) out = b.out;
      return cmds[c].run(s, out);
    } catch (const sgnn::cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 1;
}
