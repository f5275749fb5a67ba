#include "lfcbf/control/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lfcbf::control {

ConstraintRow assemble_constraint(const ControllerParams& params,
                                  const net::Dynamics& dyn,
                                  const barrier::ChainEval& ce,
                                  const Eigen::VectorXd& x, double t) {
  (void)t;
  ConstraintRow row;
  row.a_u = ce.grad_top.dot(dyn.input_direction(x));
  row.a_eps = params.qp_slack ? 1.0 : 0.0;

  double drift_terms = 0.0;
  if (params.mode == InfoMode::FullInfo) {
    drift_terms = ce.grad_top.dot(dyn.drift(x));
  } else {
    const int leader = dyn.leader();
    // Neighbors' local dynamics plus the leader's own drift row.
    double acc = dyn.block_dot(ce.grad_top, leader, dyn.drift_local(leader, x));
    for (int i : dyn.graph().neighbors(leader)) {
      acc += dyn.block_dot(ce.grad_top, i, dyn.drift_local(i, x));
      acc += dyn.block_dot(ce.grad_top, leader, dyn.drift_coupling(leader, i, x));
    }
    drift_terms = acc;
  }

  const double psi = ce.psi_top;
  const double pull = params.alpha * ControllerParams::sgn_pow(psi, params.gamma1) +
                      params.beta * ControllerParams::sgn_pow(psi, params.gamma2);
  row.b = -(drift_terms + ce.dt_top) - pull;
  return row;
}

std::pair<double, double> solve_min_norm(const ConstraintRow& row) {
  if (row.b <= 0.0) return {0.0, 0.0};
  const double norm2 = row.a_u * row.a_u + row.a_eps * row.a_eps;
  if (norm2 < 1e-24) {
    throw SingularityError(
        "input singularity: the constraint requires " + std::to_string(row.b) +
        " but the input coefficient vanished and no slack is available");
  }
  const double scale = row.b / norm2;
  return {scale * row.a_u, scale * row.a_eps};
}

MultiRowSolution solve_min_norm(const std::vector<ConstraintRow>& rows) {
  MultiRowSolution sol;
  sol.eps.assign(rows.size(), 0.0);
  if (rows.empty()) return sol;
  if (rows.size() == 1) {
    auto [u, e] = solve_min_norm(rows[0]);
    sol.u = u;
    sol.eps[0] = e;
    return sol;
  }

  const bool slack = rows.front().a_eps != 0.0;
  if (!slack) {
    // Raw mode: intersect the one-sided bounds on u.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      if (std::abs(r.a_u) < 1e-12) {
        if (r.b > 0.0) {
          throw SingularityError(
              "input singularity: a constraint requires " +
              std::to_string(r.b) +
              " but its input coefficient vanished and no slack is available");
        }
        continue;
      }
      const double bound = r.b / r.a_u;
      if (r.a_u > 0.0) {
        lo = std::max(lo, bound);
      } else {
        hi = std::min(hi, bound);
      }
    }
    if (lo > hi) {
      throw SingularityError(
          "conflicting barrier constraints leave no admissible input "
          "(raw-inequality mode)");
    }
    sol.u = std::clamp(0.0, lo, hi);
    return sol;
  }

  // QP mode with per-row slacks: active-set sweep. For active set S the
  // KKT system is (G + I) lambda = b_S with G_ij = a_i a_j, u = a' lambda,
  // eps_i = lambda_i.
  const std::size_t m = rows.size();
  std::vector<bool> active(m);
  for (std::size_t i = 0; i < m; ++i) active[i] = rows[i].b > 0.0;

  for (int sweep = 0; sweep < 16; ++sweep) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (active[i]) idx.push_back(i);
    }
    Eigen::VectorXd lambda;
    if (!idx.empty()) {
      Eigen::MatrixXd K(idx.size(), idx.size());
      Eigen::VectorXd rhs(idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
          K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              rows[idx[r]].a_u * rows[idx[c]].a_u + (r == c ? 1.0 : 0.0);
        }
        rhs[static_cast<Eigen::Index>(r)] = rows[idx[r]].b;
      }
      lambda = K.ldlt().solve(rhs);
    }
    // Drop rows whose multiplier went negative.
    bool dropped = false;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (lambda[static_cast<Eigen::Index>(r)] < 0.0) {
        active[idx[r]] = false;
        dropped = true;
      }
    }
    if (dropped) continue;

    double u = 0.0;
    std::vector<double> eps(m, 0.0);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      u += lambda[static_cast<Eigen::Index>(r)] * rows[idx[r]].a_u;
      eps[idx[r]] = lambda[static_cast<Eigen::Index>(r)];
    }
    // Add any violated inactive row.
    bool added = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i] && rows[i].a_u * u + eps[i] < rows[i].b - 1e-12) {
        active[i] = true;
        added = true;
      }
    }
    if (added) continue;
    sol.u = u;
    sol.eps = std::move(eps);
    return sol;
  }
  throw Error("active-set solve did not settle (constraint stack)");
}

}  // namespace lfcbf::control
