#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sgnn/graphcore/spectral.hpp"
#include "sgnn/polybasis/basis.hpp"
#include "sgnn/specnet/model.hpp"

namespace sgnn {

enum class JacobianDirection { Jvp, Vjp };

/// Jacobian of the non-residual spectral core
///   H^(l+1) = act(U diag(V_P theta_l) U^T H^(l) W_mid_l),  l = 0..L-1,
/// with respect to its input H^(0), linearised at the point the eval-mode
/// input MLP produces from X. Vectors are n x hidden matrices (vec is
/// column-major). The relu derivative at 0 is taken as 0. Holds a pointer
/// to decomp.eigenvectors, so `decomp` must outlive the object.
class CoreJacobian {
 public:
  CoreJacobian(const ModelParams& params, const SpectralDecomposition& decomp,
               const BasisMatrix& vp, const Eigen::MatrixXd& x);

  Eigen::MatrixXd jvp(const Eigen::MatrixXd& tangent) const;
  Eigen::MatrixXd vjp(const Eigen::MatrixXd& cotangent) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& v, JacobianDirection direction) const {
    return direction == JacobianDirection::Jvp ? jvp(v) : vjp(v);
  }

  /// Core output H^(L) at an arbitrary input (used by finite-difference checks).
  Eigen::MatrixXd evaluate(const Eigen::MatrixXd& core_input) const;

  const Eigen::MatrixXd& core_input() const { return input_; }
  Eigen::Index rows() const { return input_.rows(); }
  Eigen::Index cols() const { return input_.cols(); }

 private:
  void check(const Eigen::MatrixXd& v) const;

  const Eigen::MatrixXd* u_;
  Activation activation_;
  std::vector<Eigen::VectorXd> responses_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::MatrixXd> slopes_;  // act'(pre-activation), empty for identity
  Eigen::MatrixXd input_;
};

Eigen::MatrixXd jacobian_apply(const ModelParams& params, const SpectralDecomposition& decomp,
                               const BasisMatrix& vp, const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& v, JacobianDirection direction);

}  // namespace sgnn
