#include "lfcbf/barrier/task_barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lfcbf/barrier/smooth_min.hpp"

namespace lfcbf::barrier {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TimeVaryingBarrier::TimeVaryingBarrier(std::vector<OperatorBarrier> ops,
                                       std::vector<stl::BoundPredicate> preds,
                                       double eta, double t0)
    : ops_(std::move(ops)), preds_(std::move(preds)), eta_(eta), t0_(t0) {
  if (!(eta_ > 0.0)) throw Error("barrier smoothing parameter eta must be > 0");
  if (ops_.empty()) throw Error("barrier needs at least one operator");
  std::vector<double> deadlines;
  deadlines.reserve(ops_.size());
  for (const auto& op : ops_) deadlines.push_back(op.window_end);
  schedule_ = stl::SwitchSchedule(t0_, std::move(deadlines));
}

double TimeVaryingBarrier::op_state_value(const OperatorBarrier& op,
                                          const VectorXd& x) const {
  if (op.pred_indices.size() == 1) {
    return preds_[op.pred_indices[0]].barrier_value(x);
  }
  std::vector<double> hs;
  hs.reserve(op.pred_indices.size());
  for (int k : op.pred_indices) hs.push_back(preds_[k].barrier_value(x));
  return smooth_min(hs, eta_);
}

TimeVaryingBarrier::OpEval TimeVaryingBarrier::eval_op(
    const OperatorBarrier& op, const VectorXd& x, double t) const {
  OpEval out;
  const int d = dim();
  if (op.pred_indices.size() == 1) {
    const auto& p = preds_[op.pred_indices[0]];
    out.value = p.barrier_value(x);
    out.grad = p.barrier_gradient(x);
    out.hess = p.barrier_hessian(x);
  } else {
    // Inner smooth min over the operator's conjuncts.
    std::vector<double> hs;
    hs.reserve(op.pred_indices.size());
    for (int k : op.pred_indices) hs.push_back(preds_[k].barrier_value(x));
    const auto w = softmin_weights(hs, eta_);
    out.value = smooth_min(hs, eta_);
    out.grad = VectorXd::Zero(d);
    out.hess = MatrixXd::Zero(d, d);
    MatrixXd outer_sum = MatrixXd::Zero(d, d);
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const auto& p = preds_[op.pred_indices[k]];
      VectorXd g = p.barrier_gradient(x);
      out.grad += w[k] * g;
      out.hess += w[k] * p.barrier_hessian(x);
      outer_sum += w[k] * (g * g.transpose());
    }
    out.hess += eta_ * (out.grad * out.grad.transpose() - outer_sum);
  }
  out.value -= op.envelope.value(t);
  out.dt = -op.envelope.rate(t);
  return out;
}

BarrierEval TimeVaryingBarrier::eval(const VectorXd& x, double t) const {
  const auto active = schedule_.active_at(t);
  if (active.empty()) {
    throw ScheduleError("no active operators at t = " + std::to_string(t));
  }
  const int d = dim();

  std::vector<OpEval> evs;
  std::vector<double> values;
  evs.reserve(active.size());
  values.reserve(active.size());
  for (int j : active) {
    evs.push_back(eval_op(ops_[static_cast<std::size_t>(j)], x, t));
    values.push_back(evs.back().value);
  }

  BarrierEval out;
  out.active_operators = active;
  out.value = smooth_min(values, eta_);
  out.weights = softmin_weights(values, eta_);

  out.grad = VectorXd::Zero(d);
  out.dt = 0.0;
  out.hess = MatrixXd::Zero(d, d);
  out.grad_dt = VectorXd::Zero(d);
  out.dtt = 0.0;

  MatrixXd outer_sum = MatrixXd::Zero(d, d);
  VectorXd grad_dt_sum = VectorXd::Zero(d);
  double dt2_sum = 0.0;
  for (std::size_t k = 0; k < evs.size(); ++k) {
    const double w = out.weights[k];
    out.grad += w * evs[k].grad;
    out.dt += w * evs[k].dt;
    out.hess += w * evs[k].hess;
    outer_sum += w * (evs[k].grad * evs[k].grad.transpose());
    grad_dt_sum += w * evs[k].dt * evs[k].grad;
    dt2_sum += w * evs[k].dt * evs[k].dt;
  }
  // Softmin curvature corrections (zero when one operator dominates).
  out.hess += eta_ * (out.grad * out.grad.transpose() - outer_sum);
  out.grad_dt = eta_ * (out.dt * out.grad - grad_dt_sum);
  out.dtt = eta_ * (out.dt * out.dt - dt2_sum);
  return out;
}

double TimeVaryingBarrier::value(const VectorXd& x, double t) const {
  const auto active = schedule_.active_at(t);
  if (active.empty()) {
    throw ScheduleError("no active operators at t = " + std::to_string(t));
  }
  std::vector<double> values;
  values.reserve(active.size());
  for (int j : active) {
    const auto& op = ops_[static_cast<std::size_t>(j)];
    values.push_back(op_state_value(op, x) - op.envelope.value(t));
  }
  return smooth_min(values, eta_);
}

std::vector<double> TimeVaryingBarrier::operator_values(const VectorXd& x,
                                                        double t) const {
  std::vector<double> out;
  out.reserve(ops_.size());
  for (const auto& op : ops_) {
    out.push_back(op_state_value(op, x) - op.envelope.value(t));
  }
  return out;
}

bool TimeVaryingBarrier::uses_position() const {
  for (const auto& op : ops_) {
    for (int k : op.pred_indices) {
      if (preds_[static_cast<std::size_t>(k)].uses_position()) return true;
    }
  }
  return false;
}

namespace {

std::vector<int> conjunct_pred_indices(const stl::Node* n) {
  std::vector<int> out;
  std::function<void(const stl::Node*)> walk = [&](const stl::Node* m) {
    if (!m) return;
    switch (m->kind) {
      case stl::NodeKind::And:
        walk(m->left.get());
        walk(m->right.get());
        break;
      case stl::NodeKind::Pred:
        out.push_back(m->pred_id);
        break;
      case stl::NodeKind::True:
        break;
      default:
        throw FormulaError("temporal operator inside a state formula");
    }
  };
  walk(n);
  return out;
}

}  // namespace

TimeVaryingBarrier build_barrier(const stl::Formula& f,
                                 std::vector<stl::BoundPredicate> preds,
                                 double eta, double t0, const EnvelopeSpec& env,
                                 std::optional<double> default_window_end,
                                 double snap_grid) {
  const auto ops = stl::collect_ops(f);

  const auto snap = [&](double deadline) {
    if (snap_grid <= 0.0) return deadline;
    return t0 + std::round((deadline - t0) / snap_grid) * snap_grid;
  };

  double max_deadline = t0;
  for (const auto& op : ops.temporal) {
    max_deadline = std::max(max_deadline, snap(t0 + op.b));
  }
  const double bare_end = default_window_end.value_or(max_deadline);

  std::vector<OperatorBarrier> built;
  bool until_seen = false;
  int counter = 0;

  auto add = [&](OperatorBarrier::Kind kind, double ws, double we,
                 std::vector<int> pred_idx, const std::string& label) {
    if (pred_idx.empty()) return;  // a TRUE operand needs no barrier
    OperatorBarrier ob;
    ob.kind = kind;
    ob.window_start = ws;
    ob.window_end = we;
    ob.pred_indices = std::move(pred_idx);
    ob.label = label;
    built.push_back(std::move(ob));
    ++counter;
  };

  for (const auto& op : ops.temporal) {
    const double ws = t0 + op.a;
    const double we = snap(t0 + op.b);
    const std::string tag = "op" + std::to_string(counter + 1);
    switch (op.kind) {
      case stl::NodeKind::Always:
        // G[a,b](psi1 AND psi2) splits exactly.
        for (int pid : conjunct_pred_indices(op.child.get())) {
          add(OperatorBarrier::Kind::Hold, ws, we, {pid}, tag);
        }
        break;
      case stl::NodeKind::Eventually:
        add(OperatorBarrier::Kind::Target, ws, we,
            conjunct_pred_indices(op.child.get()), tag);
        break;
      case stl::NodeKind::Until:
        // Under-approximation: hold the left operand until the deadline
        // and force the right operand at it.
        until_seen = true;
        for (int pid : conjunct_pred_indices(op.hold.get())) {
          add(OperatorBarrier::Kind::Hold, t0, we, {pid}, tag + ".hold");
        }
        add(OperatorBarrier::Kind::Target, ws, we,
            conjunct_pred_indices(op.child.get()), tag + ".target");
        break;
      default:
        break;
    }
  }
  for (const auto& bare : ops.bare_state) {
    if (!(bare_end > t0)) {
      throw FormulaError(
          "a bare state formula needs a positive task window; give the "
          "formula a temporal operator or set a task horizon");
    }
    for (int pid : conjunct_pred_indices(bare.get())) {
      add(OperatorBarrier::Kind::Hold, t0, bare_end, {pid}, "state");
    }
  }
  if (built.empty()) {
    throw FormulaError("formula has no predicates; no barrier to build");
  }

  // Envelope origins. The ramp ends where the obligation starts binding:
  // window start for hold barriers, deadline for target barriers.
  TimeVaryingBarrier tvb(std::move(built), std::move(preds), eta, t0);
  for (auto& op : tvb.ops_) {
    op.envelope.t0 = t0;
    op.envelope.ramp_end = (op.kind == OperatorBarrier::Kind::Hold)
                               ? op.window_start
                               : op.window_end;
    if (env.mode == EnvelopeSpec::Mode::Fixed) {
      op.envelope.gamma0 = std::min(0.0, env.gamma0);
    } else {
      if (env.x0.size() != tvb.dim()) {
        throw DimensionError(
            "envelope anchor state dimension " + std::to_string(env.x0.size()) +
            " does not match the predicate dimension " +
            std::to_string(tvb.dim()));
      }
      op.envelope.gamma0 =
          std::min(0.0, tvb.op_state_value(op, env.x0) - env.margin);
    }
  }
  tvb.until_compiled_ = until_seen;
  return tvb;
}

}  // namespace lfcbf::barrier
