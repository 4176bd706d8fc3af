#include "sgnn/bounds/report.hpp"

#include <sstream>
#include <stdexcept>

#include "sgnn/format.hpp"
#include "sgnn/specnet/linalg.hpp"
#include "sgnn/specnet/network.hpp"

namespace sgnn {

BoundReport compute_bound_report(const ModelParams& params, const SpectralDecomposition& decomp,
                                 const Eigen::MatrixXd& x, std::size_t labelled,
                                 const BoundOptions& options) {
  const ModelConfig& cfg = params.config;
  const BasisMatrix vp = vandermonde(cfg.basis, cfg.order, decomp.eigenvalues);
  const ForwardPass fp = forward(params, decomp, vp, x, Mode::Eval);

  BoundReport r;
  BoundInputs& in = r.inputs;
  in.set_basis(vp);
  in.energy = spectral_energy(fp.layers.front().input_hat);
  in.alpha = lipschitz_constant(cfg.activation);
  for (int l = 0; l < cfg.filter_layers; ++l) {
    in.c_w.push_back(spectral_norm(params.weights.w_mid[l]));
    in.c_theta.push_back(params.weights.thetas[l].norm());
  }
  in.n = decomp.size();
  in.m = labelled;
  in.delta = options.delta;
  in.c1 = options.c1;
  in.c2 = options.c2;

  const NonlinearFtgc nl = ftgc_nonlinear_bound(in);
  r.ftgc_nonlinear = nl.value;
  r.weight_term = nl.weight_term;
  r.spectral_term = nl.spectral_term;
  r.ftgc_linear = ftgc_linear_bound(in);
  r.gap = gap_bound(r.ftgc_nonlinear, in);
  r.jacobian_bound = jacobian_norm_bound(in);
  r.wrapper_prefactor = spectral_norm(params.weights.w_in) * spectral_norm(params.weights.w_out);
  if (options.measure_jacobian) {
    r.true_jacobian = true_jacobian_norm(params, decomp, vp, x, options.jacobian_tol,
                                         options.jacobian_max_iter);
  }
  return r;
}

std::string format_report(const BoundReport& r) {
  std::ostringstream ss;
  const BoundInputs& in = r.inputs;
  ss << "scope=" << r.scope << '\n';
  ss << "n=" << in.n << '\n' << "m=" << in.m << '\n' << "u=" << in.u() << '\n';
  ss << "layers=" << in.layers() << '\n';
  ss << "alpha=" << format_double(in.alpha) << '\n';
  for (int l = 0; l < in.layers(); ++l) {
    ss << "c_w" << l << '=' << format_double(in.c_w[l]) << '\n';
    ss << "c_theta" << l << '=' << format_double(in.c_theta[l]) << '\n';
  }
  ss << "vp_two_inf_norm=" << format_double(in.two_inf_norm) << '\n';
  ss << "energy_total=" << format_double(in.energy.sum()) << '\n';
  ss << "delta=" << format_double(in.delta) << '\n';
  ss << "c1=" << format_double(in.c1) << '\n' << "c2=" << format_double(in.c2) << '\n';
  ss << "c_gc=" << format_double(kGaussianComplexityConstant) << '\n';
  ss << "ftgc_nonlinear=" << format_double(r.ftgc_nonlinear) << '\n';
  ss << "ftgc_linear=" << format_double(r.ftgc_linear) << '\n';
  ss << "weight_term=" << format_double(r.weight_term) << '\n';
  ss << "spectral_term=" << format_double(r.spectral_term) << '\n';
  ss << "gap_complexity_term=" << format_double(r.gap.complexity_term) << '\n';
  ss << "gap_partition_term=" << format_double(r.gap.partition_term) << '\n';
  ss << "gap_confidence_term=" << format_double(r.gap.confidence_term) << '\n';
  ss << "gap_bound=" << format_double(r.gap.total()) << '\n';
  ss << "jacobian_bound=" << format_double(r.jacobian_bound) << '\n';
  ss << "wrapper_prefactor=" << format_double(r.wrapper_prefactor) << '\n';
  if (r.true_jacobian) {
    ss << "true_jacobian=" << format_double(r.true_jacobian->norm) << '\n';
    ss << "true_jacobian_iterations=" << r.true_jacobian->iterations << '\n';
    ss << "true_jacobian_converged=" << (r.true_jacobian->converged ? 1 : 0) << '\n';
    ss << "true_jacobian_last_gap=" << format_double(r.true_jacobian->last_gap) << '\n';
  }
  return ss.str();
}

std::string report_csv_header() {
  return "n,m,layers,ftgc_nonlinear,ftgc_linear,weight_term,spectral_term,gap_complexity_term,"
         "gap_partition_term,gap_confidence_term,gap_bound,jacobian_bound,wrapper_prefactor,"
         "true_jacobian";
}

std::string report_csv_row(const BoundReport& r) {
  std::ostringstream ss;
  ss << r.inputs.n << ',' << r.inputs.m << ',' << r.inputs.layers() << ','
     << format_double(r.ftgc_nonlinear) << ',' << format_double(r.ftgc_linear) << ','
     << format_double(r.weight_term) << ',' << format_double(r.spectral_term) << ','
     << format_double(r.gap.complexity_term) << ',' << format_double(r.gap.partition_term) << ','
     << format_double(r.gap.confidence_term) << ',' << format_double(r.gap.total()) << ','
     << format_double(r.jacobian_bound) << ',' << format_double(r.wrapper_prefactor) << ','
     << (r.true_jacobian ? format_double(r.true_jacobian->norm) : std::string());
  return ss.str();
}

std::vector<DepthPoint> depth_curve(const BoundInputs& base, int max_layers,
                                    double adjacency_inf_norm) {
  if (max_layers < 1) throw std::invalid_argument("max_layers must be >= 1");
  if (base.c_w.empty() || base.c_theta.empty()) throw std::invalid_argument("no layer constants");
  std::vector<DepthPoint> out;
  for (int L = 1; L <= max_layers; ++L) {
    BoundInputs in = base;
    in.c_w.assign(static_cast<std::size_t>(L), base.c_w.front());
    in.c_theta.assign(static_cast<std::size_t>(L), base.c_theta.front());
    DepthPoint p;
    p.layers = L;
    p.ftgc_nonlinear = ftgc_nonlinear_bound(in).value;
    p.ftgc_linear = ftgc_linear_bound(in);
    p.jacobian_bound = jacobian_norm_bound(in);
    p.adjacency_inf_norm_pow = std::pow(adjacency_inf_norm, L);
    out.push_back(p);
  }
  return out;
}

}  // namespace sgnn
