#pragma once

#include <Eigen/Dense>
#include <optional>

#include "lfcbf/net/graph.hpp"

namespace lfcbf::net {

/// Pairwise coupling primitives for the drift registry. Scenario files
/// pick one by name; no user code is ever executed.
enum class CouplingKind {
  Linear,           // phi(y) = y
  SaturatedLinear,  // phi(y) = clamp(y, -limit, limit)
};

/// Leader-follower network dynamics with weight matrix L (row i holds the
/// consensus weights of agent i) and leader-only actuation.
///
///   order 1:  pdot_i = -sum_j L_ij phi(p_j) + b_i g u
///   order 2:  pdot_i = v_i
///             vdot_i = -sum_j L_ij phi(p_j) - sum_j L_ij phi(v_j) + b_i g u
///
/// Stacked layout: x = (p_1..p_n) or (p_1..p_n, v_1..v_n). The input
/// column has its single nonzero entry in the leader's top-derivative
/// slot. Off-diagonal L entries must respect the communication graph.
class Dynamics {
 public:
  Dynamics(int order, Graph graph, Eigen::MatrixXd weights, double leader_gain,
           CouplingKind coupling = CouplingKind::Linear,
           double saturation_limit = 1.0);

  int order() const { return order_; }
  int n() const { return graph_.n(); }
  int dim() const { return order_ * graph_.n(); }
  int leader() const { return graph_.leader(); }
  double leader_gain() const { return gain_; }
  const Graph& graph() const { return graph_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

  /// Stacked drift f(x).
  Eigen::VectorXd drift(const Eigen::VectorXd& x) const;

  /// Jacobian of the stacked drift.
  Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd& x) const;

  /// Input column g(x): zeros except the leader's actuated slot.
  Eigen::VectorXd input_direction(const Eigen::VectorXd& x) const;

  /// Index of the single nonzero entry of g.
  int input_slot() const {
    return (order_ == 2) ? n() + leader() - 1 : leader() - 1;
  }

  /// Agent i's drift block restricted to terms depending only on its own
  /// state (for order 2 the kinematic row pdot_i = v_i is local).
  Eigen::VectorXd drift_local(int i, const Eigen::VectorXd& x) const;

  /// Agent i's drift terms contributed by agent j != i.
  Eigen::VectorXd drift_coupling(int i, int j, const Eigen::VectorXd& x) const;

  /// Stacked indices of agent i's block: {i-1} or {i-1, n+i-1}.
  std::vector<int> agent_slots(int i) const;

  /// grad(block of agent i) . (agent i drift block) convenience.
  double block_dot(const Eigen::VectorXd& grad, int i,
                   const Eigen::VectorXd& block) const;

 private:
  void check_dim(const Eigen::VectorXd& x) const;
  double phi(double y) const;
  double dphi(double y) const;

  int order_;
  Graph graph_;
  Eigen::MatrixXd weights_;
  double gain_;
  CouplingKind coupling_;
  double sat_limit_;
};

}  // namespace lfcbf::net
