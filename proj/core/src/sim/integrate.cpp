#include "lfcbf/sim/integrate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lfcbf::sim {

using Eigen::VectorXd;

namespace {

VectorXd rhs(const net::Dynamics& dyn, const VectorXd& x, double u) {
  VectorXd dx = dyn.drift(x);
  if (u != 0.0) dx += dyn.input_direction(x) * u;
  return dx;
}

[[noreturn]] void abort_nonfinite(const VectorXd& x, double t) {
  std::ostringstream os;
  os << "state became non-finite at t = " << t << "; last state: [";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << "]";
  throw Error(os.str());
}

}  // namespace

Trajectory integrate(const net::Dynamics& dyn,
                     const control::LeaderController* controller,
                     const VectorXd& x0, double t0, double horizon, double dt) {
  if (!(dt > 0.0)) throw Error("integration step dt must be positive");
  if (horizon < 0.0) throw Error("horizon must be nonnegative");
  if (x0.size() != dyn.dim()) {
    throw DimensionError("x0 has dimension " + std::to_string(x0.size()) +
                         ", expected " + std::to_string(dyn.dim()));
  }
  const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
  if (std::abs(static_cast<double>(n_steps) * dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw Error("dt = " + std::to_string(dt) +
                " does not divide the horizon " + std::to_string(horizon));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);

  const stl::SwitchSchedule* schedule =
      controller ? &controller->chain().barrier().schedule() : nullptr;

  VectorXd x = x0;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (!x.allFinite()) abort_nonfinite(x, t);

    double u = 0.0, eps = 0.0, h = nan, psi = nan;
    bool singular = false;
    if (controller) {
      const auto res = controller->control(x, t);
      u = res.u;
      eps = res.eps;
      h = res.h;
      psi = res.psi_top;
      singular = res.singular;
    }
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.u.push_back(u);
    traj.eps.push_back(eps);
    traj.h.push_back(h);
    traj.psi1.push_back(psi);
    traj.switch_flag.push_back(
        schedule && schedule->is_switch_instant(t, dt * 1e-6) ? 1 : 0);
    traj.singular.push_back(singular ? 1 : 0);

    if (k == n_steps) break;

    // Classical RK4 with the input held over the step.
    const VectorXd k1 = rhs(dyn, x, u);
    const VectorXd k2 = rhs(dyn, x + 0.5 * dt * k1, u);
    const VectorXd k3 = rhs(dyn, x + 0.5 * dt * k2, u);
    const VectorXd k4 = rhs(dyn, x + dt * k3, u);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

}  // namespace lfcbf::sim
