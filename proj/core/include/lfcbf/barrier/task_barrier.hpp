#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lfcbf/stl/formula.hpp"
#include "lfcbf/stl/predicate.hpp"
#include "lfcbf/stl/schedule.hpp"

namespace lfcbf::barrier {

/// Time envelope of one operator barrier: a piecewise-linear ramp from
/// gamma0 <= 0 at t0 up to zero at ramp_end, zero afterwards. With the
/// ramp pinned to the obligation window (its start for always, its
/// deadline for eventually), h_j >= 0 along the trajectory implies the
/// operator's satisfaction clause.
struct Envelope {
  double t0 = 0.0;
  double ramp_end = 0.0;  // absolute time where the envelope reaches 0
  double gamma0 = 0.0;    // value at t0, <= 0

  double value(double t) const {
    if (t >= ramp_end || ramp_end <= t0) return 0.0;
    if (t <= t0) return gamma0;
    return gamma0 * (1.0 - (t - t0) / (ramp_end - t0));
  }
  double rate(double t) const {
    if (t >= ramp_end || ramp_end <= t0) return 0.0;
    return -gamma0 / (ramp_end - t0);
  }
};

/// How the envelope origin gamma0 is chosen when building a barrier.
struct EnvelopeSpec {
  enum class Mode {
    Auto,   // gamma0_j = min(0, h_j(x0) - margin): start inside the set
    Fixed,  // gamma0_j = gamma0 for every operator
  };
  Mode mode = Mode::Auto;
  double margin = 1.0;   // Auto: initial slack of every operator barrier
  double gamma0 = -1.0;  // Fixed: shared envelope origin, <= 0
  Eigen::VectorXd x0;    // Auto: state the envelopes are anchored to
};

/// One barrier h_j(x,t) = h_psi(x) - gamma_j(t) attached to a temporal
/// operator. h_psi is the predicate value, or a smooth min over the
/// conjuncts when the operator's state formula is a conjunction.
struct OperatorBarrier {
  enum class Kind { Hold, Target };  // always-like vs eventually-like
  Kind kind = Kind::Hold;
  double window_start = 0.0;  // absolute [a_j, b_j]
  double window_end = 0.0;
  std::vector<int> pred_indices;  // into the bound-predicate list
  Envelope envelope;
  std::string label;
};

struct BarrierEval {
  double value = 0.0;
  Eigen::VectorXd grad;     // d h / dx
  double dt = 0.0;          // d h / dt
  Eigen::MatrixXd hess;     // d2 h / dx2
  Eigen::VectorXd grad_dt;  // d2 h / dx dt
  double dtt = 0.0;         // d2 h / dt2
  std::vector<double> weights;        // softmin weights over active ops
  std::vector<int> active_operators;  // indices into ops()
};

/// Composite time-varying task barrier
///   h(x,t) = -(1/eta) ln sum_{j active} exp(-eta h_j(x,t)),
/// with operators deactivating at their deadlines per the switching
/// schedule. Immutable after construction; evaluation is pure.
class TimeVaryingBarrier {
 public:
  TimeVaryingBarrier(std::vector<OperatorBarrier> ops,
                     std::vector<stl::BoundPredicate> preds, double eta,
                     double t0);

  BarrierEval eval(const Eigen::VectorXd& x, double t) const;

  /// Value-only helper.
  double value(const Eigen::VectorXd& x, double t) const;

  /// Per-operator barrier values at (x,t) for every operator, active or
  /// not (diagnostics and plots).
  std::vector<double> operator_values(const Eigen::VectorXd& x,
                                      double t) const;

  const std::vector<OperatorBarrier>& ops() const { return ops_; }
  const stl::SwitchSchedule& schedule() const { return schedule_; }
  double eta() const { return eta_; }
  double t0() const { return t0_; }
  double end() const { return schedule_.end(); }
  int dim() const { return preds_.empty() ? 0 : preds_.front().dim(); }
  bool uses_position() const;
  bool until_compiled() const { return until_compiled_; }

 private:
  struct OpEval {
    double value;
    Eigen::VectorXd grad;
    double dt;
    Eigen::MatrixXd hess;
  };
  OpEval eval_op(const OperatorBarrier& op, const Eigen::VectorXd& x,
                 double t) const;
  double op_state_value(const OperatorBarrier& op,
                        const Eigen::VectorXd& x) const;

  std::vector<OperatorBarrier> ops_;
  std::vector<stl::BoundPredicate> preds_;
  double eta_;
  double t0_;
  stl::SwitchSchedule schedule_;
  bool until_compiled_ = false;

  friend TimeVaryingBarrier build_barrier(const stl::Formula&,
                                          std::vector<stl::BoundPredicate>,
                                          double, double, const EnvelopeSpec&,
                                          std::optional<double>, double);
};

/// Builds the composite barrier for a fragment formula.
///
/// Every always/eventually operator becomes one OperatorBarrier; a
/// conjunction under an always operator splits into one barrier per
/// conjunct (exact); a conjunction under eventually keeps its conjuncts
/// inside a single barrier through an inner smooth min. Until compiles to
/// a hold barrier over [t0, b] on its left operand plus a target barrier
/// on [a, b] for its right operand, the standard under-approximation.
/// Bare state-formula conjuncts become hold barriers over the whole task
/// window (default_window_end, defaulting to the schedule end).
///
/// With snap_grid > 0, operator deadlines snap to the nearest multiple of
/// snap_grid past t0 so that switching instants coincide with integration
/// grid points (displacement is at most snap_grid/2).
TimeVaryingBarrier build_barrier(
    const stl::Formula& f, std::vector<stl::BoundPredicate> preds, double eta,
    double t0, const EnvelopeSpec& env,
    std::optional<double> default_window_end = std::nullopt,
    double snap_grid = 0.0);

}  // namespace lfcbf::barrier
