#include "sgnn/specnet/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace sgnn {

void adam_step(ModelParams& params, const ParamTensors& grads, const AdamOptions& options) {
  auto p_views = params.weights.views();
  auto m_views = params.adam.m.views();
  auto v_views = params.adam.v.views();
  const auto g_views = grads.views();
  if (g_views.size() != p_views.size() || m_views.size() != p_views.size() ||
      v_views.size() != p_views.size()) {
    throw std::invalid_argument("gradient / optimizer state layout does not match parameters");
  }

  params.adam.step += 1;
  const double t = static_cast<double>(params.adam.step);
  const double bias1 = 1.0 - std::pow(options.beta1, t);
  const double bias2 = 1.0 - std::pow(options.beta2, t);
  const double decay = options.lr * options.weight_decay;

  for (std::size_t k = 0; k < p_views.size(); ++k) {
    auto p = p_views[k];
    auto m = m_views[k];
    auto v = v_views[k];
    const auto g = g_views[k];
    if (g.size() != p.size()) throw std::invalid_argument("gradient tensor size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (decay != 0.0) p[i] -= decay * p[i];
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * g[i];
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      p[i] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
    }
  }
}

}  // namespace sgnn
