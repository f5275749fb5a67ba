#include "lfcbf/barrier/chain.hpp"

namespace lfcbf::barrier {

BarrierChain::BarrierChain(std::shared_ptr<const TimeVaryingBarrier> bar,
                           int order, double lambda1_slope,
                           const net::Dynamics& dyn)
    : bar_(std::move(bar)), m_(order), slope_(lambda1_slope) {
  if (m_ != 1 && m_ != 2) {
    throw Error("barrier chain order must be 1 or 2, got " +
                std::to_string(m_));
  }
  if (m_ == 2) {
    if (dyn.order() != 2) {
      throw Error("a chain of order 2 needs second-order dynamics "
                  "(relative degree mismatch)");
    }
    if (!(slope_ > 0.0)) {
      throw Error("lambda_1 must be strictly increasing: slope > 0");
    }
  } else if (dyn.order() == 2 && bar_->uses_position()) {
    throw Error("position predicates on second-order dynamics have relative "
                "degree 2; use a chain of order 2");
  }
  if (bar_->dim() != dyn.dim()) {
    throw DimensionError("barrier dimension " + std::to_string(bar_->dim()) +
                         " does not match the network dimension " +
                         std::to_string(dyn.dim()));
  }
}

ChainEval BarrierChain::eval(const net::Dynamics& dyn, const Eigen::VectorXd& x,
                             double t) const {
  ChainEval out;
  out.base = bar_->eval(x, t);
  out.h = out.base.value;
  if (m_ == 1) {
    out.psi_top = out.base.value;
    out.grad_top = out.base.grad;
    out.dt_top = out.base.dt;
    return out;
  }
  const Eigen::VectorXd f = dyn.drift(x);
  const Eigen::MatrixXd J = dyn.drift_jacobian(x);
  out.psi_top = out.base.grad.dot(f) + out.base.dt + slope_ * out.base.value;
  out.grad_top = out.base.hess * f + J.transpose() * out.base.grad +
                 out.base.grad_dt + slope_ * out.base.grad;
  out.dt_top = out.base.grad_dt.dot(f) + out.base.dtt + slope_ * out.base.dt;
  return out;
}

}  // namespace lfcbf::barrier
