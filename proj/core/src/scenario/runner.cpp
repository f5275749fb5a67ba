#include "lfcbf/scenario/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "lfcbf/net/residual.hpp"
#include "lfcbf/sim/integrate.hpp"

namespace lfcbf::scenario {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Spec'd numerical-zero for the invariance monitor.
double invariance_tolerance(double dt, double scale) {
  return 10.0 * dt * dt * dt * dt * std::max(1.0, scale);
}

/// Scan one subtask's obligations along the trajectory and merge failing
/// grid times into maximal windows.
std::vector<std::pair<double, double>> violation_windows(
    const CompiledScenario& cs, const stl::Formula& task,
    const sim::Trajectory& traj) {
  std::vector<std::pair<double, double>> windows;
  const auto ops = stl::collect_ops(task);
  const double t0 = cs.spec.t0;

  auto state_value = [&](const stl::Node* n, const Eigen::VectorXd& x) {
    // Min over the conjunct predicates: the instantaneous obligation.
    double m = std::numeric_limits<double>::infinity();
    std::function<void(const stl::Node*)> walk = [&](const stl::Node* q) {
      if (!q) return;
      if (q->kind == stl::NodeKind::And) {
        walk(q->left.get());
        walk(q->right.get());
      } else if (q->kind == stl::NodeKind::Pred) {
        m = std::min(m, cs.preds[static_cast<std::size_t>(q->pred_id)].value(x));
      }
    };
    walk(n);
    return std::isfinite(m) ? m : 1.0;
  };

  auto add_failing_times = [&](double lo, double hi, const stl::Node* psi) {
    std::optional<double> open;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double t = traj.times[k];
      const bool in_window = t >= lo - 1e-9 && t <= hi + 1e-9;
      const bool failing = in_window && state_value(psi, traj.states[k]) < 0.0;
      if (failing && !open) open = t;
      if (!failing && open) {
        windows.emplace_back(*open, traj.times[k - 1]);
        open.reset();
      }
    }
    if (open) windows.emplace_back(*open, traj.times.back());
  };

  for (const auto& op : ops.temporal) {
    const double lo = t0 + op.a;
    const double hi = t0 + op.b;
    switch (op.kind) {
      case stl::NodeKind::Always:
        add_failing_times(lo, hi, op.child.get());
        break;
      case stl::NodeKind::Eventually: {
        bool met = false;
        for (std::size_t k = 0; k < traj.size() && !met; ++k) {
          const double t = traj.times[k];
          if (t >= lo - 1e-9 && t <= hi + 1e-9) {
            met = state_value(op.child.get(), traj.states[k]) >= 0.0;
          }
        }
        if (!met) windows.emplace_back(lo, hi);
        break;
      }
      case stl::NodeKind::Until:
        // Report against the compiled under-approximation.
        add_failing_times(t0, hi, op.hold.get());
        {
          bool met = false;
          for (std::size_t k = 0; k < traj.size() && !met; ++k) {
            const double t = traj.times[k];
            if (t >= lo - 1e-9 && t <= hi + 1e-9) {
              met = state_value(op.child.get(), traj.states[k]) >= 0.0;
            }
          }
          if (!met) windows.emplace_back(lo, hi);
        }
        break;
      default:
        break;
    }
  }
  for (const auto& bare : ops.bare_state) {
    add_failing_times(t0, t0 + cs.spec.horizon, bare.get());
  }

  std::sort(windows.begin(), windows.end());
  // Merge overlaps.
  std::vector<std::pair<double, double>> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.first <= merged.back().second + 1e-9) {
      merged.back().second = std::max(merged.back().second, w.second);
    } else {
      merged.push_back(w);
    }
  }
  return merged;
}

}  // namespace

std::vector<TaskReport> evaluate_tasks(const CompiledScenario& cs,
                                       const sim::Trajectory& traj) {
  std::vector<TaskReport> out;
  const auto signal = traj.sampled_states();
  const auto task_barriers = cs.subtask_barriers();
  std::size_t bar_idx = 0;
  for (std::size_t i = 0; i < cs.subtask_formulas.size(); ++i) {
    TaskReport tr;
    tr.name = i < cs.spec.subtask_names.size() ? cs.spec.subtask_names[i]
                                               : "phi" + std::to_string(i + 1);
    tr.formula = cs.subtask_formulas[i].to_string(cs.table);
    try {
      tr.verdict = stl::evaluate(cs.subtask_formulas[i], cs.preds, signal,
                                 cs.spec.t0);
    } catch (const HorizonError&) {
      tr.verdict = false;
      tr.horizon_ok = false;
    }
    tr.violation_windows = violation_windows(cs, cs.subtask_formulas[i], traj);

    const auto fops = stl::collect_ops(cs.subtask_formulas[i]);
    const bool has_barrier =
        !fops.temporal.empty() || !fops.bare_state.empty();
    if (has_barrier && bar_idx < task_barriers.size()) {
      double min_b = std::numeric_limits<double>::infinity();
      const auto& tb = task_barriers[bar_idx++];
      for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] > tb.end() + 1e-9) break;
        min_b = std::min(min_b, tb.value(traj.states[k], traj.times[k]));
      }
      tr.min_barrier = std::isfinite(min_b) ? min_b : 0.0;
    }
    out.push_back(std::move(tr));
  }
  return out;
}

double estimate_delta(const CompiledScenario& cs, const sim::Trajectory& traj,
                      int n_samples, unsigned seed) {
  if (!cs.chain || traj.size() == 0) return 0.0;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, traj.size() - 1);
  auto sampler = [&]() -> std::pair<Eigen::VectorXd, double> {
    const std::size_t k = pick(rng);
    return {traj.states[k], traj.times[k]};
  };
  auto grad = [&](const Eigen::VectorXd& x, double t) -> Eigen::VectorXd {
    return cs.chain->eval(*cs.dynamics, x, t).grad_top;
  };
  return net::residual_delta_estimate(*cs.dynamics, grad, sampler, n_samples);
}

RunResult run_scenario(const CompiledScenario& cs, unsigned seed) {
  RunResult out;
  RunReport& rep = out.report;
  rep.scenario = cs.spec.name;
  rep.notes = cs.notes;

  double dt = cs.spec.dt;
  const auto t_start = std::chrono::steady_clock::now();
  out.trajectory = sim::integrate(*cs.dynamics, cs.controller.get(),
                                  cs.spec.x0, cs.spec.t0, cs.spec.horizon, dt);

  auto min_of = [](const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) {
      if (std::isfinite(x)) m = std::min(m, x);
    }
    return m;
  };

  if (cs.controller) {
    // One automatic halving when the invariance monitor trips.
    const double min_h = min_of(out.trajectory.h);
    const double scale =
        std::max(std::abs(min_of(out.trajectory.h)), 1.0);
    if (out.trajectory.h.size() > 0 && std::isfinite(out.trajectory.h[0]) &&
        out.trajectory.h[0] >= 0.0 &&
        min_h < -invariance_tolerance(dt, scale)) {
      dt *= 0.5;
      rep.dt_halved = true;
      rep.notes.push_back("invariance monitor tripped; step size halved to " +
                          fmt(dt));
      out.trajectory =
          sim::integrate(*cs.dynamics, cs.controller.get(), cs.spec.x0,
                         cs.spec.t0, cs.spec.horizon, dt);
    }
  }
  const auto t_stop = std::chrono::steady_clock::now();
  rep.wall_seconds =
      std::chrono::duration<double>(t_stop - t_start).count();
  rep.dt_used = dt;
  rep.steps = out.trajectory.size() > 0 ? out.trajectory.size() - 1 : 0;
  rep.per_step_millis =
      rep.steps > 0 ? 1e3 * rep.wall_seconds / static_cast<double>(rep.steps)
                    : 0.0;

  // STL verdicts and violation windows.
  rep.tasks = evaluate_tasks(cs, out.trajectory);
  rep.all_satisfied =
      std::all_of(rep.tasks.begin(), rep.tasks.end(),
                  [](const TaskReport& t) { return t.verdict; });

  const auto& traj = out.trajectory;
  if (cs.controller && traj.size() > 0) {
    rep.min_h = min_of(traj.h);
    rep.min_psi_top = min_of(traj.psi1);
    rep.started_inside = traj.h[0] >= 0.0;

    // Minimum of h over each switching interval.
    const auto& sched = cs.barrier->schedule();
    const auto& instants = sched.instants();
    for (std::size_t l = 0; l + 1 < instants.size(); ++l) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] >= instants[l] - 1e-9 &&
            traj.times[k] <= instants[l + 1] + 1e-9) {
          m = std::min(m, traj.h[k]);
        }
      }
      rep.interval_min_h.emplace_back(instants[l], m);
    }

    // Measured convergence: first grid time with h >= 0.
    rep.converged = false;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (traj.h[k] >= 0.0) {
        rep.measured_convergence_time = traj.times[k] - cs.spec.t0;
        rep.converged = true;
        break;
      }
    }

    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (traj.singular[k]) rep.singular_times.push_back(traj.times[k]);
    }

    // Certificates.
    if (cs.spec.delta) {
      rep.delta_used = *cs.spec.delta;
    } else if (cs.dynamics->graph().leader_sees_all() ||
               cs.params.mode == control::InfoMode::FullInfo) {
      rep.delta_used = 0.0;
    } else {
      rep.delta_used =
          estimate_delta(cs, traj, cs.spec.delta_samples, seed);
      rep.delta_estimated = true;
    }
    if (cs.params.mu) {
      rep.certificate = control::fixed_time_bound(cs.params, rep.delta_used);
      const double eps = rep.certificate->eps_max;
      rep.robust_floor = (cs.params.cbf_order == 2)
                             ? cs.chain->lambda1_inverse(-eps)
                             : -eps;
      rep.robust_bound_ok = rep.min_h >= rep.robust_floor - 1e-9;
      if (rep.certificate->T > sched.min_gap()) {
        rep.notes.push_back(
            "certified T = " + fmt(rep.certificate->T) +
            " exceeds the smallest switching gap " + fmt(sched.min_gap()) +
            "; the fixed-time bound may not hold within every interval");
      }
    }
    rep.lemma_T = control::lemma_time_bound(cs.params);
  }
  return out;
}

RunResult run_scenario(const Scenario& sc, unsigned seed) {
  return run_scenario(compile(sc), seed);
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "scenario: " << scenario << "\n";
  os << "steps: " << steps << "  dt: " << dt_used
     << (dt_halved ? " (halved once)" : "") << "  wall: " << wall_seconds
     << " s  per-step: " << per_step_millis << " ms\n";
  os << "tasks:\n";
  for (const auto& t : tasks) {
    os << "  " << t.name << ": " << (t.verdict ? "satisfied" : "VIOLATED");
    if (!t.horizon_ok) os << " (trajectory shorter than the task horizon)";
    os << "  [min task barrier " << t.min_barrier << "]\n";
    os << "    " << t.formula << "\n";
    for (const auto& w : t.violation_windows) {
      os << "    violated in [" << w.first << ", " << w.second << "]\n";
    }
  }
  os << "composite barrier: min h = " << min_h
     << "  min psi_top = " << min_psi_top << "\n";
  os << "per-interval min h:";
  for (const auto& [tau, m] : interval_min_h) {
    os << "  [" << tau << ": " << m << "]";
  }
  os << "\n";
  os << "started inside: " << (started_inside ? "yes" : "no")
     << "  first h >= 0 at t0 + "
     << (converged ? measured_convergence_time
                   : std::numeric_limits<double>::quiet_NaN())
     << " s\n";
  os << "delta: " << delta_used << (delta_estimated ? " (estimated)" : "")
     << "\n";
  if (certificate) {
    os << "certificate: branch " << certificate->branch
       << "  T = " << certificate->T << " s  eps_max = " << certificate->eps_max
       << "  robust floor = " << robust_floor
       << (robust_bound_ok ? "  (bound held)" : "  (BOUND VIOLATED)") << "\n";
  }
  os << "lemma reach bound: " << lemma_T << " s\n";
  if (!singular_times.empty()) {
    os << "singular instants (|a_u| < 1e-9): " << singular_times.size()
       << " events, first at t = " << singular_times.front() << "\n";
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  os << (all_satisfied ? "all tasks satisfied" : "TASK VIOLATIONS PRESENT")
     << "\n";
  return os.str();
}

}  // namespace lfcbf::scenario
