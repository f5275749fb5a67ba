#pragma once

#include <memory>

#include "lfcbf/control/controller.hpp"
#include "lfcbf/sim/trajectory.hpp"

namespace lfcbf::sim {

/// Closed-loop integration of xdot = f(x) + g(x) u with the classical
/// fourth-order fixed-step scheme. The leader input is sampled at the
/// step start and held constant across the step. A null controller means
/// u = 0 (pure drift) and leaves the barrier columns NaN.
///
/// dt must divide the horizon. States are checked for finiteness; a
/// diverging run aborts with a diagnostic dump of the last state.
Trajectory integrate(const net::Dynamics& dyn,
                     const control::LeaderController* controller,
                     const Eigen::VectorXd& x0, double t0, double horizon,
                     double dt);

}  // namespace lfcbf::sim
