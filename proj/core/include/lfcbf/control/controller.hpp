#pragma once

#include <memory>
#include <vector>

#include "lfcbf/barrier/chain.hpp"
#include "lfcbf/control/constraint.hpp"

namespace lfcbf::control {

/// Everything observed while computing one leader input.
struct ControlResult {
  double u = 0.0;
  double eps = 0.0;  // total slack across rows
  std::vector<ConstraintRow> rows;
  double h = 0.0;        // monitor barrier (or psi_0 of the only chain)
  double psi_top = 0.0;  // top function of the highest-order chain
  bool constraint_active = false;  // some row demanded a push (b > 0)
  bool singular = false;           // some |a_u| under the threshold
};

/// Leader input synthesis: one fixed-time inequality per barrier chain,
/// then the minimum-norm point over the shared scalar input (closed-form
/// slack QP). Mixed-relative-degree tasks split into one chain per
/// degree; pure tasks use a single chain. Stateless given (x, t).
class LeaderController {
 public:
  /// `chains` holds one entry per relative-degree group, highest order
  /// last. `monitor` is the all-operator composite logged as h; when
  /// null, the first chain's barrier is used.
  LeaderController(std::shared_ptr<const net::Dynamics> dyn,
                   std::vector<std::shared_ptr<const barrier::BarrierChain>>
                       chains,
                   std::shared_ptr<const barrier::TimeVaryingBarrier> monitor,
                   ControllerParams params);

  /// Single-chain convenience (the common case and the spec'd tests).
  LeaderController(std::shared_ptr<const net::Dynamics> dyn,
                   std::shared_ptr<const barrier::BarrierChain> chain,
                   ControllerParams params)
      : LeaderController(std::move(dyn), {std::move(chain)}, nullptr,
                         params) {}

  ControlResult control(const Eigen::VectorXd& x, double t) const;

  const ControllerParams& params() const { return params_; }
  /// Highest-order chain: the one certificates and residual bounds use.
  const barrier::BarrierChain& chain() const { return *chains_.back(); }
  const std::vector<std::shared_ptr<const barrier::BarrierChain>>& chains()
      const {
    return chains_;
  }
  const barrier::TimeVaryingBarrier& monitor_barrier() const {
    return *monitor_;
  }
  const net::Dynamics& dynamics() const { return *dyn_; }

  /// |a_u| below this reports a singularity event in the diagnostics.
  static constexpr double kSingularTol = 1e-9;

 private:
  std::shared_ptr<const net::Dynamics> dyn_;
  std::vector<std::shared_ptr<const barrier::BarrierChain>> chains_;
  std::shared_ptr<const barrier::TimeVaryingBarrier> monitor_;
  ControllerParams params_;
};

}  // namespace lfcbf::control
