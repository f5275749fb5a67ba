#pragma once

#include <Eigen/Dense>
#include <memory>

#include "lfcbf/barrier/task_barrier.hpp"
#include "lfcbf/net/dynamics.hpp"

namespace lfcbf::barrier {

/// Values a controller needs at one (x, t): the base barrier, the top
/// chain function psi_{m-1}, and its first-order sensitivities.
struct ChainEval {
  double h = 0.0;        // psi_0
  double psi_top = 0.0;  // psi_{m-1}; equals h for m = 1
  Eigen::VectorXd grad_top;
  double dt_top = 0.0;
  BarrierEval base;
};

/// Barrier chain psi_0 = h, psi_1 = hdot|_drift + lambda_1(h) for
/// relative degree two. lambda_1 is linear with positive slope, an
/// extended class-K choice whose inverse is needed for the relaxed-set
/// reporting. Orders supported: m in {1, 2}.
///
/// For m = 2 the drift derivative is input-independent only when the
/// input enters at the velocity level and the barrier has position
/// relative degree two, so construction rejects order mismatches:
///   - m = 2 requires second-order dynamics;
///   - m = 1 on second-order dynamics requires a velocity-only barrier
///     (a position predicate never sees the input at level one).
class BarrierChain {
 public:
  BarrierChain(std::shared_ptr<const TimeVaryingBarrier> bar, int order,
               double lambda1_slope, const net::Dynamics& dyn);

  ChainEval eval(const net::Dynamics& dyn, const Eigen::VectorXd& x,
                 double t) const;

  int order() const { return m_; }
  double lambda1_slope() const { return slope_; }
  double lambda1(double r) const { return slope_ * r; }
  double lambda1_inverse(double y) const { return y / slope_; }
  const TimeVaryingBarrier& barrier() const { return *bar_; }
  std::shared_ptr<const TimeVaryingBarrier> barrier_ptr() const { return bar_; }

 private:
  std::shared_ptr<const TimeVaryingBarrier> bar_;
  int m_;
  double slope_;
};

}  // namespace lfcbf::barrier
