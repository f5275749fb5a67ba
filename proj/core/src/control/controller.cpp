#include "lfcbf/control/controller.hpp"

#include <algorithm>
#include <cmath>

namespace lfcbf::control {

LeaderController::LeaderController(
    std::shared_ptr<const net::Dynamics> dyn,
    std::vector<std::shared_ptr<const barrier::BarrierChain>> chains,
    std::shared_ptr<const barrier::TimeVaryingBarrier> monitor,
    ControllerParams params)
    : dyn_(std::move(dyn)),
      chains_(std::move(chains)),
      monitor_(std::move(monitor)),
      params_(params) {
  params_.validate();
  if (chains_.empty()) throw Error("controller needs at least one chain");
  std::sort(chains_.begin(), chains_.end(),
            [](const auto& a, const auto& b) { return a->order() < b->order(); });
  if (!monitor_) monitor_ = chains_.front()->barrier_ptr();
}

ControlResult LeaderController::control(const Eigen::VectorXd& x,
                                        double t) const {
  ControlResult out;
  out.h = monitor_->value(x, std::min(t, monitor_->end()));

  bool any = false;
  for (const auto& chain : chains_) {
    // A chain past its last deadline has completed its obligations.
    if (t > chain->barrier().end() + 1e-9) continue;
    const auto ce = chain->eval(*dyn_, x, t);
    out.rows.push_back(assemble_constraint(params_, *dyn_, ce, x, t));
    out.psi_top = ce.psi_top;
    out.singular |= std::abs(out.rows.back().a_u) < kSingularTol &&
                    out.rows.back().b > 0.0;
    out.constraint_active |= out.rows.back().b > 0.0;
    any = true;
  }
  if (!any) return out;

  const auto sol = solve_min_norm(out.rows);
  out.u = sol.u;
  for (double e : sol.eps) out.eps += e;
  return out;
}

}  // namespace lfcbf::control
