#pragma once

#include "lfcbf/control/params.hpp"

namespace lfcbf::control {

/// Analytic fixed-time certificate for the comparison dynamics
///   Vdot <= -alpha V^gamma1 - beta V^gamma2 + delta,
/// with gamma1 = 1 - 1/mu, gamma2 = 1 + 1/mu. The case split is on the
/// discriminant of gamma(s) = alpha s^2 - delta s + beta.
struct Certificate {
  double T = 0.0;        // fixed reach time, seconds
  double eps_max = 0.0;  // ultimate bound on the residual set
  int branch = 3;        // 1: delta > 2 sqrt(ab), 2: equal, 3: below
  double root_b = 0.0;   // quadratic roots (branch 1)
  double root_c = 0.0;
  double k1 = 0.0;       // branch 3 constants
  double k2 = 0.0;
  double delta = 0.0;
};

/// Evaluates the three-branch T and eps_max formulas. Requires the mu
/// parameterization and delta >= 0; every delta is covered by a branch.
/// Branch selection treats |delta^2 - 4 alpha beta| <= 1e-12 as the
/// boundary branch.
Certificate fixed_time_bound(const ControllerParams& params, double delta);

/// The eps_max component alone.
double epsilon_max_bound(const ControllerParams& params, double delta);

/// Reach-time bound for the unperturbed inequality (delta = 0):
/// 1/(alpha (1-gamma1)) + 1/(beta (gamma2-1)). Valid for any admissible
/// gamma pair, not only the mu parameterization.
double lemma_time_bound(const ControllerParams& params);

}  // namespace lfcbf::control
