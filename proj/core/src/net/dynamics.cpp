#include "lfcbf/net/dynamics.hpp"

#include <cmath>
#include <queue>

namespace lfcbf::net {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, int leader)
    : n_(n), leader_(leader), edges_(std::move(edges)) {
  if (n_ < 1) throw ValidationError({"a network needs at least one agent"});
  if (leader_ != n_) {
    throw ValidationError(
        {"the leader must be the last agent (got leader " +
         std::to_string(leader_) + " of " + std::to_string(n_) + ")"});
  }
  adjacency_.assign(static_cast<std::size_t>(n_), {});
  for (auto& [i, j] : edges_) {
    if (i < 1 || i > n_ || j < 1 || j > n_ || i == j) {
      throw ValidationError({"invalid edge (" + std::to_string(i) + "," +
                             std::to_string(j) + ")"});
    }
    if (!adjacent(i, j)) {
      adjacency_[static_cast<std::size_t>(i - 1)].push_back(j);
      adjacency_[static_cast<std::size_t>(j - 1)].push_back(i);
    }
  }
}

std::vector<int> Graph::leader_non_neighbors() const {
  std::vector<int> out;
  for (int i = 1; i < n_; ++i) {
    if (!adjacent(leader_, i)) out.push_back(i);
  }
  return out;
}

bool Graph::connected() const {
  if (n_ == 1) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::queue<int> q;
  q.push(1);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int i = q.front();
    q.pop();
    for (int j : neighbors(i)) {
      if (!seen[static_cast<std::size_t>(j - 1)]) {
        seen[static_cast<std::size_t>(j - 1)] = true;
        ++count;
        q.push(j);
      }
    }
  }
  return count == n_;
}

Dynamics::Dynamics(int order, Graph graph, MatrixXd weights, double leader_gain,
                   CouplingKind coupling, double saturation_limit)
    : order_(order),
      graph_(std::move(graph)),
      weights_(std::move(weights)),
      gain_(leader_gain),
      coupling_(coupling),
      sat_limit_(saturation_limit) {
  std::vector<std::string> problems;
  if (order_ != 1 && order_ != 2) problems.push_back("order must be 1 or 2");
  const int n = graph_.n();
  if (weights_.rows() != n || weights_.cols() != n) {
    problems.push_back("weight matrix must be " + std::to_string(n) + "x" +
                       std::to_string(n));
  } else {
    // Coupling must respect the communication graph.
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i != j && weights_(i - 1, j - 1) != 0.0 && !graph_.adjacent(i, j)) {
          problems.push_back("L(" + std::to_string(i) + "," +
                             std::to_string(j) +
                             ") is nonzero but the agents are not adjacent");
        }
      }
    }
  }
  if (coupling_ == CouplingKind::SaturatedLinear && !(sat_limit_ > 0.0)) {
    problems.push_back("saturation limit must be positive");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

void Dynamics::check_dim(const VectorXd& x) const {
  if (x.size() != dim()) {
    throw DimensionError("state has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(dim()));
  }
}

double Dynamics::phi(double y) const {
  if (coupling_ == CouplingKind::SaturatedLinear) {
    return std::clamp(y, -sat_limit_, sat_limit_);
  }
  return y;
}

double Dynamics::dphi(double y) const {
  if (coupling_ == CouplingKind::SaturatedLinear) {
    return (std::abs(y) < sat_limit_) ? 1.0 : 0.0;
  }
  return 1.0;
}

VectorXd Dynamics::drift(const VectorXd& x) const {
  check_dim(x);
  const int n = graph_.n();
  VectorXd out = VectorXd::Zero(dim());
  if (order_ == 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc -= weights_(i, j) * phi(x[j]);
      out[i] = acc;
    }
  } else {
    out.head(n) = x.tail(n);  // pdot = v
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc -= weights_(i, j) * phi(x[j]);
        acc -= weights_(i, j) * phi(x[n + j]);
      }
      out[n + i] = acc;
    }
  }
  return out;
}

MatrixXd Dynamics::drift_jacobian(const VectorXd& x) const {
  check_dim(x);
  const int n = graph_.n();
  MatrixXd J = MatrixXd::Zero(dim(), dim());
  if (order_ == 1) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) J(i, j) = -weights_(i, j) * dphi(x[j]);
    }
  } else {
    J.topRightCorner(n, n).setIdentity();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        J(n + i, j) = -weights_(i, j) * dphi(x[j]);
        J(n + i, n + j) = -weights_(i, j) * dphi(x[n + j]);
      }
    }
  }
  return J;
}

VectorXd Dynamics::input_direction(const VectorXd& x) const {
  check_dim(x);
  VectorXd g = VectorXd::Zero(dim());
  g[input_slot()] = gain_;
  return g;
}

VectorXd Dynamics::drift_local(int i, const VectorXd& x) const {
  check_dim(x);
  const int n = graph_.n();
  const int row = i - 1;
  if (order_ == 1) {
    VectorXd out(1);
    out[0] = -weights_(row, row) * phi(x[row]);
    return out;
  }
  VectorXd out(2);
  out[0] = x[n + row];
  out[1] = -weights_(row, row) * (phi(x[row]) + phi(x[n + row]));
  return out;
}

VectorXd Dynamics::drift_coupling(int i, int j, const VectorXd& x) const {
  check_dim(x);
  const int n = graph_.n();
  const int row = i - 1;
  const int col = j - 1;
  if (i == j) throw Error("drift_coupling needs two distinct agents");
  if (order_ == 1) {
    VectorXd out(1);
    out[0] = -weights_(row, col) * phi(x[col]);
    return out;
  }
  VectorXd out(2);
  out[0] = 0.0;
  out[1] = -weights_(row, col) * (phi(x[col]) + phi(x[n + col]));
  return out;
}

std::vector<int> Dynamics::agent_slots(int i) const {
  if (order_ == 1) return {i - 1};
  return {i - 1, n() + i - 1};
}

double Dynamics::block_dot(const VectorXd& grad, int i,
                           const VectorXd& block) const {
  const auto slots = agent_slots(i);
  double acc = 0.0;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    acc += grad[slots[k]] * block[static_cast<Eigen::Index>(k)];
  }
  return acc;
}

}  // namespace lfcbf::net
