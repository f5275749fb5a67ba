#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfcbf/scenario/scenario.hpp"
#include "lfcbf/sim/trajectory.hpp"

namespace lfcbf::scenario {

struct TaskReport {
  std::string name;
  std::string formula;
  bool verdict = true;
  bool horizon_ok = true;
  double min_barrier = 0.0;  // per-subtask composite barrier minimum
  /// Maximal grid intervals where an obligation of the subtask is being
  /// violated (an always window with a failing predicate, or the full
  /// window of an unmet eventually).
  std::vector<std::pair<double, double>> violation_windows;
};

struct RunReport {
  std::string scenario;
  std::vector<TaskReport> tasks;
  bool all_satisfied = true;

  // barrier monitors
  double min_h = 0.0;
  double min_psi_top = 0.0;
  std::vector<std::pair<double, double>> interval_min_h;  // (tau_l, min)
  bool started_inside = true;
  double measured_convergence_time = 0.0;  // first t with h >= 0
  bool converged = true;

  // certificates
  double delta_used = 0.0;
  bool delta_estimated = false;
  std::optional<control::Certificate> certificate;
  double lemma_T = 0.0;
  double robust_floor = 0.0;  // lambda_1^{-1}(-eps_max) for m = 2
  bool robust_bound_ok = true;

  // events and stats
  std::vector<double> singular_times;
  bool dt_halved = false;
  double dt_used = 0.0;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  double per_step_millis = 0.0;
  std::vector<std::string> notes;

  std::string to_text() const;
};

struct RunResult {
  sim::Trajectory trajectory;
  RunReport report;
};

/// Integrates the closed loop and runs every monitor: per-interval
/// forward invariance, the robust lower bound through lambda_1^{-1},
/// STL verdicts per subtask, measured against certified convergence time,
/// and the singularity event log. The step size is halved once when the
/// invariance monitor trips on a run that started inside the safe set.
RunResult run_scenario(const CompiledScenario& cs, unsigned seed = 1);

/// Convenience overload: compile + run.
RunResult run_scenario(const Scenario& sc, unsigned seed = 1);

/// Shared verdict computation so `check` agrees with `run` by
/// construction. Returns per-subtask reports for a given trajectory.
std::vector<TaskReport> evaluate_tasks(const CompiledScenario& cs,
                                       const sim::Trajectory& traj);

/// Residual-bound estimate sampled along a trajectory (the visited
/// domain), used when the scenario does not pin delta.
double estimate_delta(const CompiledScenario& cs, const sim::Trajectory& traj,
                      int n_samples, unsigned seed);

}  // namespace lfcbf::scenario
