#pragma once

#include <vector>

#include "lfcbf/stl/formula.hpp"

namespace lfcbf::stl {

/// Precomputed deactivation instants for a conjunction of temporal
/// operators. instants() = {tau_0 = t0 < tau_1 < ... < tau_p}, where
/// tau_p is the largest deadline. Operator j is active on [t0, deadline_j)
/// and removed at its deadline, so active sets only shrink.
class SwitchSchedule {
 public:
  SwitchSchedule() = default;
  /// `deadlines[j]` is the absolute deadline of operator j. Deadlines at
  /// or before t0 are rejected. Duplicates collapse into one switch.
  SwitchSchedule(double t0, std::vector<double> deadlines);

  double t0() const { return t0_; }
  double end() const { return instants_.back(); }
  const std::vector<double>& instants() const { return instants_; }
  std::size_t operator_count() const { return deadlines_.size(); }
  double deadline(std::size_t j) const { return deadlines_[j]; }

  /// Active operators at time t, right-continuous at switches: an operator
  /// is dropped the moment its deadline passes. At t == end() the
  /// operators deactivating last are reported so the final instant stays
  /// well defined. Throws ScheduleError for t outside [t0, end()].
  std::vector<int> active_at(double t) const;

  /// Index l with t in [tau_l, tau_{l+1}); the last interval is closed.
  std::size_t interval_index(double t) const;

  /// Smallest gap tau_{l+1} - tau_l (infinity when there is no switch).
  double min_gap() const;

  bool is_switch_instant(double t, double tol) const;

 private:
  double t0_ = 0.0;
  std::vector<double> deadlines_;
  std::vector<double> instants_;  // tau_0 .. tau_p
};

/// Schedule for a formula's temporal operators, evaluated from t0.
/// Intervals [a,b] are relative to t0; deadlines are t0 + b_j.
/// A formula without temporal operators yields the trivial schedule {t0}.
SwitchSchedule switching_schedule(const Formula& f, double t0);

}  // namespace lfcbf::stl
