#include "sgnn/specnet/jacobian.hpp"

#include <stdexcept>

namespace sgnn {

CoreJacobian::CoreJacobian(const ModelParams& params, const SpectralDecomposition& decomp,
                           const BasisMatrix& vp, const Eigen::MatrixXd& x)
    : u_(&decomp.eigenvectors), activation_(params.config.activation) {
  const ModelConfig& cfg = params.config;
  const ParamTensors& w = params.weights;
  if (x.rows() != static_cast<Eigen::Index>(decomp.size()) || x.cols() != w.w_in.rows()) {
    throw std::invalid_argument("feature matrix shape does not match model/graph");
  }
  if (vp.values.rows() != x.rows() || vp.values.cols() != cfg.order + 1) {
    throw std::invalid_argument("Vandermonde matrix does not match graph/order");
  }
  input_ = (x * w.w_in).cwiseMax(0.0);
  Eigen::MatrixXd h = input_;
  for (int l = 0; l < cfg.filter_layers; ++l) {
    responses_.push_back(vp.values * w.thetas[l]);
    weights_.push_back(w.w_mid[l]);
    const Eigen::MatrixXd pre =
        (*u_) * (responses_.back().asDiagonal() * (u_->transpose() * h)) * w.w_mid[l];
    if (activation_ == Activation::Relu) {
      slopes_.push_back((pre.array() > 0.0).cast<double>().matrix());
      h = pre.cwiseMax(0.0);
    } else {
      h = pre;
    }
  }
}

void CoreJacobian::check(const Eigen::MatrixXd& v) const {
  if (v.rows() != input_.rows() || v.cols() != input_.cols()) {
    throw std::invalid_argument("Jacobian direction has wrong shape");
  }
}

Eigen::MatrixXd CoreJacobian::jvp(const Eigen::MatrixXd& tangent) const {
  check(tangent);
  Eigen::MatrixXd t = tangent;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    t = (*u_) * (responses_[l].asDiagonal() * (u_->transpose() * t)) * weights_[l];
    if (!slopes_.empty()) t = t.cwiseProduct(slopes_[l]);
  }
  return t;
}

Eigen::MatrixXd CoreJacobian::vjp(const Eigen::MatrixXd& cotangent) const {
  check(cotangent);
  Eigen::MatrixXd s = cotangent;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    if (!slopes_.empty()) s = s.cwiseProduct(slopes_[l]);
    s = (*u_) * (responses_[l].asDiagonal() * (u_->transpose() * (s * weights_[l].transpose())));
  }
  return s;
}

Eigen::MatrixXd CoreJacobian::evaluate(const Eigen::MatrixXd& core_input) const {
  check(core_input);
  Eigen::MatrixXd h = core_input;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    h = (*u_) * (responses_[l].asDiagonal() * (u_->transpose() * h)) * weights_[l];
    if (activation_ == Activation::Relu) h = h.cwiseMax(0.0);
  }
  return h;
}

Eigen::MatrixXd jacobian_apply(const ModelParams& params, const SpectralDecomposition& decomp,
                               const BasisMatrix& vp, const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& v, JacobianDirection direction) {
  return CoreJacobian(params, decomp, vp, x).apply(v, direction);
}

}  // namespace sgnn
