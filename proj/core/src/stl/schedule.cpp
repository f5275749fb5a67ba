#include "lfcbf/stl/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfcbf/errors.hpp"

namespace lfcbf::stl {

namespace {
constexpr double kDedupTol = 1e-9;

// zeta(b, t): remaining time to deadline b, infinite once passed.
double zeta(double b, double t) {
  return (b - t > 0.0) ? (b - t) : std::numeric_limits<double>::infinity();
}
}  // namespace

SwitchSchedule::SwitchSchedule(double t0, std::vector<double> deadlines)
    : t0_(t0), deadlines_(std::move(deadlines)) {
  for (double b : deadlines_) {
    if (!(b > t0_)) {
      throw ScheduleError("operator deadline " + std::to_string(b) +
                          " is not after t0 = " + std::to_string(t0_));
    }
  }
  instants_.push_back(t0_);
  // Repeatedly take the nearest remaining deadline; ties collapse.
  double t = t0_;
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    for (double b : deadlines_) best = std::min(best, zeta(b, t));
    if (!std::isfinite(best)) break;
    t += best;
    instants_.push_back(t);
  }
  // Merge switches closer than the dedup tolerance.
  std::vector<double> merged;
  for (double v : instants_) {
    if (merged.empty() || v - merged.back() > kDedupTol) merged.push_back(v);
  }
  instants_ = std::move(merged);
}

std::vector<int> SwitchSchedule::active_at(double t) const {
  if (t < t0_ - kDedupTol || t > end() + kDedupTol) {
    throw ScheduleError("time " + std::to_string(t) +
                        " outside the schedule [" + std::to_string(t0_) + ", " +
                        std::to_string(end()) + "]");
  }
  std::vector<int> out;
  if (deadlines_.empty()) return out;
  const bool at_end = t >= end() - kDedupTol;
  for (std::size_t j = 0; j < deadlines_.size(); ++j) {
    if (at_end) {
      // Keep the final operators alive at the closing instant itself.
      if (deadlines_[j] >= end() - kDedupTol) out.push_back(static_cast<int>(j));
    } else if (deadlines_[j] > t + kDedupTol) {
      out.push_back(static_cast<int>(j));
    }
  }
  return out;
}

std::size_t SwitchSchedule::interval_index(double t) const {
  if (t < t0_ - kDedupTol || t > end() + kDedupTol) {
    throw ScheduleError("time " + std::to_string(t) +
                        " outside the schedule [" + std::to_string(t0_) + ", " +
                        std::to_string(end()) + "]");
  }
  if (instants_.size() < 2) return 0;
  for (std::size_t l = 0; l + 1 < instants_.size(); ++l) {
    if (t < instants_[l + 1] - kDedupTol) return l;
  }
  return instants_.size() - 2;
}

double SwitchSchedule::min_gap() const {
  if (instants_.size() < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < instants_.size(); ++l) {
    g = std::min(g, instants_[l + 1] - instants_[l]);
  }
  return g;
}

bool SwitchSchedule::is_switch_instant(double t, double tol) const {
  for (std::size_t l = 1; l < instants_.size(); ++l) {
    if (std::abs(instants_[l] - t) <= tol) return true;
  }
  return false;
}

SwitchSchedule switching_schedule(const Formula& f, double t0) {
  std::vector<double> deadlines;
  for (const auto& op : collect_ops(f).temporal) {
    deadlines.push_back(t0 + op.b);
  }
  return SwitchSchedule(t0, std::move(deadlines));
}

}  // namespace lfcbf::stl
