#include "sgnn/harness/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sgnn/format.hpp"
#include "sgnn/harness/pool.hpp"
#include "sgnn/harness/split.hpp"
#include "sgnn/harness/text.hpp"

namespace sgnn {
namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct Task {
  std::size_t candidate;
  int seed_index;
};

struct TaskResult {
  bool ok = false;
  double val_acc = 0.0, val_loss = 0.0, test_acc = 0.0, gap = 0.0;
};

// Better candidate: higher mean validation accuracy, then lower mean validation loss.
bool better(const CandidateRuns& a, const CandidateRuns& b) {
  const double da = a.mean_val_acc() - b.mean_val_acc();
  if (std::abs(da) > 1e-12) return da > 0.0;
  return a.mean_val_loss() < b.mean_val_loss() - 1e-12;
}

const CandidateRuns& select_best(const std::vector<CandidateRuns>& all, bool base_only) {
  const CandidateRuns* best = nullptr;
  for (const CandidateRuns& c : all) {
    if (c.failures > 0) continue;
    if (base_only && c.lambda_ew != 0.0) continue;
    if (best == nullptr || better(c, *best)) best = &c;
  }
  if (best == nullptr) throw std::runtime_error("every ablation candidate failed to train");
  return *best;
}

}  // namespace

std::string to_string(const HyperParams& hp) {
  std::ostringstream ss;
  ss << "lr=" << format_double(hp.lr) << ";weight_decay=" << format_double(hp.weight_decay)
     << ";hidden=" << hp.hidden << ";dropout1=" << format_double(hp.dropout1)
     << ";dropout2=" << format_double(hp.dropout2);
  return ss.str();
}

std::size_t HyperGrid::size() const {
  return lr.size() * weight_decay.size() * hidden.size() * dropout1.size() * dropout2.size();
}

std::vector<HyperParams> HyperGrid::sample(int count, std::uint64_t seed) const {
  const std::size_t total = size();
  if (count < 0) throw std::invalid_argument("negative trial count");
  if (total == 0 && count > 0) throw std::invalid_argument("empty hyperparameter grid");
  const auto want = std::min<std::size_t>(static_cast<std::size_t>(count), total);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  std::set<std::size_t> seen;
  std::vector<HyperParams> out;
  while (out.size() < want) {
    std::size_t idx = pick(rng);
    if (!seen.insert(idx).second) continue;
    HyperParams hp;
    hp.dropout2 = dropout2[idx % dropout2.size()];
    idx /= dropout2.size();
    hp.dropout1 = dropout1[idx % dropout1.size()];
    idx /= dropout1.size();
    hp.hidden = hidden[idx % hidden.size()];
    idx /= hidden.size();
    hp.weight_decay = weight_decay[idx % weight_decay.size()];
    idx /= weight_decay.size();
    hp.lr = lr[idx];
    out.push_back(hp);
  }
  return out;
}

double CandidateRuns::mean_val_acc() const { return mean_of(val_acc); }
double CandidateRuns::mean_val_loss() const { return mean_of(val_loss); }

std::vector<AblationRow> run_ablation(const AblationSpec& spec) {
  if (spec.dataset == nullptr) throw std::invalid_argument("ablation needs a dataset");
  if (spec.bases.empty()) throw std::invalid_argument("ablation needs at least one basis");
  if (spec.seeds < 2) throw std::invalid_argument("ablation needs at least two splits");
  for (double l : spec.lambda_grid) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambda must be >= 0");
  }
  const Dataset& data = *spec.dataset;

  std::vector<Split> splits;
  std::vector<std::uint64_t> init_seeds;
  for (int s = 0; s < spec.seeds; ++s) {
    const auto si = static_cast<std::uint64_t>(s);
    splits.push_back(make_split(data.graph.labels, spec.per_class, spec.val_frac,
                                derive_seed(spec.base_seed, si, 1)));
    init_seeds.push_back(derive_seed(spec.base_seed, si, 2));
  }

  // lambda = 0 is always searched so the regularised search contains the baseline.
  std::vector<double> lambdas{0.0};
  for (double l : spec.lambda_grid) {
    if (l != 0.0 && std::find(lambdas.begin(), lambdas.end(), l) == lambdas.end()) {
      lambdas.push_back(l);
    }
  }

  std::vector<AblationRow> rows;
  for (std::size_t b = 0; b < spec.bases.size(); ++b) {
    const Basis basis = spec.bases[b];
    std::vector<HyperParams> hps{spec.defaults};
    for (const HyperParams& hp :
         spec.grid.sample(spec.trials, derive_seed(spec.base_seed, b, 7))) {
      if (std::find(hps.begin(), hps.end(), hp) == hps.end()) hps.push_back(hp);
    }

    std::vector<CandidateRuns> candidates;
    for (const HyperParams& hp : hps) {
      for (double l : lambdas) {
        CandidateRuns c;
        c.hp = hp;
        c.lambda_ew = l;
        candidates.push_back(std::move(c));
      }
    }
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      for (int s = 0; s < spec.seeds; ++s) tasks.push_back({c, s});
    }

    auto work = [&](std::size_t i) {
      const Task& t = tasks[i];
      const CandidateRuns& cand = candidates[t.candidate];
      TaskResult r;
      try {
        ModelConfig cfg = spec.model;
        cfg.basis = basis;
        cfg.hidden = cand.hp.hidden;
        cfg.dropout1 = cand.hp.dropout1;
        cfg.dropout2 = cand.hp.dropout2;
        cfg.lambda_ew = cand.lambda_ew;
        cfg.input_dim = static_cast<int>(data.graph.feature_dim());
        cfg.classes = data.graph.num_classes();
        TrainConfig tc = spec.train;
        tc.lr = cand.hp.lr;
        tc.weight_decay = cand.hp.weight_decay;
        const auto si = static_cast<std::size_t>(t.seed_index);
        const TrainResult tr = train(cfg, tc, data, splits[si], init_seeds[si]);
        r.ok = true;
        r.val_acc = tr.val_acc;
        r.val_loss = tr.val_loss;
        r.test_acc = tr.test_acc;
        r.gap = tr.gap;
      } catch (const std::exception&) {
        r.ok = false;
      }
      return r;
    };
    run_ordered<TaskResult>(tasks.size(), spec.jobs, work, [&](std::size_t i, TaskResult r) {
      CandidateRuns& c = candidates[tasks[i].candidate];
      if (!r.ok) {
        ++c.failures;
        return;
      }
      c.val_acc.push_back(r.val_acc);
      c.val_loss.push_back(r.val_loss);
      c.test_acc.push_back(r.test_acc);
      c.gap.push_back(r.gap);
    });

    const CandidateRuns& base = select_best(candidates, true);
    const CandidateRuns& reg = select_best(candidates, false);
    AblationRow row;
    row.dataset = data.name;
    row.basis = basis;
    row.base_hp = base.hp;
    row.reg_hp = reg.hp;
    row.reg_lambda = reg.lambda_ew;
    row.base_acc = base.test_acc;
    row.reg_acc = reg.test_acc;
    row.base_gap = base.gap;
    row.reg_gap = reg.gap;
    row.base_acc_ci = mean_ci95(row.base_acc);
    row.reg_acc_ci = mean_ci95(row.reg_acc);
    row.base_gap_ci = mean_ci95(row.base_gap);
    row.reg_gap_ci = mean_ci95(row.reg_gap);
    row.acc_test = paired_test(row.base_acc, row.reg_acc);
    row.gap_test = paired_test(row.base_gap, row.reg_gap);
    row.candidates = candidates.size();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ablation_csv_header() {
  return "dataset,basis,rescaled,split,base_lambda,reg_lambda,base_test_acc,reg_test_acc,"
         "base_gap,reg_gap";
}

std::vector<std::string> ablation_csv_rows(const AblationRow& row) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < row.base_acc.size(); ++s) {
    std::ostringstream ss;
    ss << row.dataset << ',' << to_string(row.basis.kind) << ',' << (row.basis.rescaled ? 1 : 0)
       << ',' << s << ",0," << format_double(row.reg_lambda) << ','
       << format_double(row.base_acc[s]) << ',' << format_double(row.reg_acc[s]) << ','
       << format_double(row.base_gap[s]) << ',' << format_double(row.reg_gap[s]);
    out.push_back(ss.str());
  }
  return out;
}

}  // namespace sgnn
