#pragma once

#include <Eigen/Dense>

#include "lfcbf/barrier/chain.hpp"
#include "lfcbf/control/params.hpp"
#include "lfcbf/net/dynamics.hpp"

namespace lfcbf::control {

/// One scalar half-space constraint a_u u + a_eps eps >= b on the
/// decision variables (u, eps).
struct ConstraintRow {
  double a_u = 0.0;
  double a_eps = 0.0;  // 1 in QP mode, 0 in raw-inequality mode
  double b = 0.0;      // requirement net of the input-independent terms
};

/// Assembles the fixed-time barrier inequality at (x, t) as a constraint
/// row over (u, eps), with psi = psi_{m-1}(x, t):
///
///   a_u  = (dpsi/dx_n) g_n
///   b    = -(known drift terms) - dpsi/dt
///          - alpha sgn(psi)|psi|^gamma1 - beta sgn(psi)|psi|^gamma2
///
/// Full information sums the drift terms over every agent. Partial
/// information keeps only the leader's knowledge set: the neighbors'
/// local dynamics and the leader's own row.
ConstraintRow assemble_constraint(const ControllerParams& params,
                                  const net::Dynamics& dyn,
                                  const barrier::ChainEval& chain_eval,
                                  const Eigen::VectorXd& x, double t);

/// Minimum-norm point of {(u, eps) : a_u u + a_eps eps >= b}:
/// (0,0) when b <= 0, else b a / |a|^2. With a_eps = 1 the problem is
/// always feasible; with a_eps = 0 and a_u = 0 and b > 0 the constraint
/// hits an input singularity and SingularityError is thrown.
std::pair<double, double> solve_min_norm(const ConstraintRow& row);

struct MultiRowSolution {
  double u = 0.0;
  std::vector<double> eps;  // one slack per row (all zero in raw mode)
};

/// Minimum-norm input for a stack of rows sharing the scalar input.
/// QP mode (a_eps = 1 per row): min 1/2 (u^2 + sum eps_i^2) subject to
/// a_i u + eps_i >= b_i, solved exactly by an active-set sweep over the
/// rows. Raw mode (a_eps = 0): every row becomes a one-sided bound on u;
/// an empty intersection or a vanished coefficient with b > 0 throws
/// SingularityError.
MultiRowSolution solve_min_norm(const std::vector<ConstraintRow>& rows);

}  // namespace lfcbf::control
