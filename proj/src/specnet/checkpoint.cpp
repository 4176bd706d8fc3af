#include "sgnn/specnet/checkpoint.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sgnn/errors.hpp"
#include "sgnn/format.hpp"

namespace sgnn {
namespace {

constexpr const char* kMagic = "sgnn-checkpoint";
constexpr int kVersion = 1;

void write_tensor(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_set(std::ostream& out, const std::string& prefix, const ParamTensors& t) {
  write_tensor(out, prefix + "w_in", t.w_in);
  for (std::size_t l = 0; l < t.thetas.size(); ++l) {
    write_tensor(out, prefix + "theta" + std::to_string(l), t.thetas[l]);
    write_tensor(out, prefix + "w_mid" + std::to_string(l), t.w_mid[l]);
  }
  write_tensor(out, prefix + "w_out", t.w_out);
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::vector<std::string> tokens() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    ++line_;
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_, line_, msg); }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

ModelConfig parse_config(const std::vector<std::string>& toks, Reader& rd) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos) rd.fail("expected key=value, got '" + toks[i] + "'");
    kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) rd.fail("config is missing '" + key + "'");
    return it->second;
  };
  ModelConfig c;
  try {
    c.input_dim = parse_int<int>(get("input_dim"));
    c.hidden = parse_int<int>(get("hidden"));
    c.classes = parse_int<int>(get("classes"));
    c.order = parse_int<int>(get("order"));
    c.basis.kind = parse_basis_kind(get("basis"));
    c.basis.rescaled = parse_int<int>(get("rescaled")) != 0;
    c.filter_layers = parse_int<int>(get("filter_layers"));
    c.activation = parse_activation(get("activation"));
    c.dropout1 = parse_double(get("dropout1"));
    c.dropout2 = parse_double(get("dropout2"));
    c.lambda_ew = parse_double(get("lambda_ew"));
    c.reg_target = parse_reg_target(get("reg_target"));
    c.clip_logits = parse_int<int>(get("clip_logits")) != 0;
    c.logit_bound = parse_double(get("logit_bound"));
    c.seed = parse_int<std::uint64_t>(get("seed"));
    c.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    rd.fail(e.what());
  }
  return c;
}

void read_tensor(Reader& rd, const std::string& name, Eigen::MatrixXd& dst) {
  const auto head = rd.tokens();
  if (head.size() != 4 || head[0] != "tensor") rd.fail("expected tensor header for " + name);
  if (head[1] != name) rd.fail("expected tensor '" + name + "', found '" + head[1] + "'");
  Eigen::Index rows = 0, cols = 0;
  try {
    rows = parse_int<Eigen::Index>(head[2]);
    cols = parse_int<Eigen::Index>(head[3]);
  } catch (const std::exception& e) {
    rd.fail(e.what());
  }
  if (rows != dst.rows() || cols != dst.cols()) {
    rd.fail("tensor '" + name + "' has shape " + head[2] + "x" + head[3] +
            ", config implies " + std::to_string(dst.rows()) + "x" + std::to_string(dst.cols()));
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto vals = rd.tokens();
    if (static_cast<Eigen::Index>(vals.size()) != cols) rd.fail("wrong number of values in row");
    for (Eigen::Index j = 0; j < cols; ++j) {
      try {
        dst(i, j) = parse_double(vals[static_cast<std::size_t>(j)]);
      } catch (const std::exception& e) {
        rd.fail(e.what());
      }
    }
  }
}

void read_set(Reader& rd, const std::string& prefix, ParamTensors& t) {
  read_tensor(rd, prefix + "w_in", t.w_in);
  for (std::size_t l = 0; l < t.thetas.size(); ++l) {
    Eigen::MatrixXd theta(t.thetas[l].size(), 1);
    read_tensor(rd, prefix + "theta" + std::to_string(l), theta);
    t.thetas[l] = theta.col(0);
    read_tensor(rd, prefix + "w_mid" + std::to_string(l), t.w_mid[l]);
  }
  read_tensor(rd, prefix + "w_out", t.w_out);
}

}  // namespace

std::string config_to_string(const ModelConfig& c) {
  std::ostringstream ss;
  ss << "input_dim=" << c.input_dim << " hidden=" << c.hidden << " classes=" << c.classes
     << " order=" << c.order << " basis=" << to_string(c.basis.kind)
     << " rescaled=" << (c.basis.rescaled ? 1 : 0) << " filter_layers=" << c.filter_layers
     << " activation=" << to_string(c.activation) << " dropout1=" << format_double(c.dropout1)
     << " dropout2=" << format_double(c.dropout2) << " lambda_ew=" << format_double(c.lambda_ew)
     << " reg_target=" << to_string(c.reg_target) << " clip_logits=" << (c.clip_logits ? 1 : 0)
     << " logit_bound=" << format_double(c.logit_bound) << " seed=" << c.seed;
  return ss.str();
}

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "config " << config_to_string(params.config) << '\n';
  out << "adam_step " << params.adam.step << '\n';
  write_set(out, "", params.weights);
  write_set(out, "adam.m.", params.adam.m);
  write_set(out, "adam.v.", params.adam.v);
  out << "end\n";
}

ModelParams read_checkpoint(std::istream& in, const std::string& source) {
  Reader rd(in, source);
  auto toks = rd.tokens();
  if (toks.size() != 2 || toks[0] != kMagic) rd.fail("not an sgnn checkpoint");
  if (toks[1] != std::to_string(kVersion)) rd.fail("unsupported checkpoint version " + toks[1]);

  toks = rd.tokens();
  if (toks.empty() || toks[0] != "config") rd.fail("expected config line");
  const ModelConfig cfg = parse_config(toks, rd);

  ModelParams p = init_model(cfg, cfg.seed);
  toks = rd.tokens();
  if (toks.size() != 2 || toks[0] != "adam_step") rd.fail("expected adam_step line");
  try {
    p.adam.step = parse_int<long>(toks[1]);
  } catch (const std::exception& e) {
    rd.fail(e.what());
  }
  read_set(rd, "", p.weights);
  read_set(rd, "adam.m.", p.adam.m);
  read_set(rd, "adam.v.", p.adam.v);
  toks = rd.tokens();
  if (toks.size() != 1 || toks[0] != "end") rd.fail("expected end marker");
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, params);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace sgnn
