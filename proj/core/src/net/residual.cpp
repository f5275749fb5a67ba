#include "lfcbf/net/residual.hpp"

#include <algorithm>
#include <cmath>

namespace lfcbf::net {

double residual_delta_estimate(const Dynamics& dyn, const PsiGradient& grad,
                               const DomainSampler& sample, int n_samples) {
  const auto non_nb = dyn.graph().leader_non_neighbors();
  if (non_nb.empty()) return 0.0;
  const auto& leader_nb = dyn.graph().neighbors(dyn.leader());

  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const auto [x, t] = sample();
    const Eigen::VectorXd g = grad(x, t);
    double r = 0.0;
    for (int j : non_nb) {
      Eigen::VectorXd fj = dyn.drift_local(j, x);
      for (int k : dyn.graph().neighbors(j)) fj += dyn.drift_coupling(j, k, x);
      r += dyn.block_dot(g, j, fj);
    }
    for (int i : leader_nb) {
      if (i == dyn.leader()) continue;
      for (int j : non_nb) {
        if (j == i) continue;
        r += dyn.block_dot(g, i, dyn.drift_coupling(i, j, x));
      }
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace lfcbf::net
