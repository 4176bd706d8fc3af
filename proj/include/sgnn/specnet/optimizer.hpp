#pragma once

#include "sgnn/specnet/model.hpp"

namespace sgnn {

struct AdamOptions {
  double lr = 0.01;
  double weight_decay = 0.0;  // decoupled: p -= lr * wd * p before the Adam update
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam step on every tensor; advances params.adam.step.
void adam_step(ModelParams& params, const ParamTensors& grads, const AdamOptions& options);

}  // namespace sgnn
