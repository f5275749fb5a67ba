#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lfcbf/stl/formula.hpp"
#include "lfcbf/stl/predicate.hpp"

namespace lfcbf::stl {

/// Uniformly sampled stacked-state signal, the view `evaluate` works on.
struct SampledStates {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<Eigen::VectorXd> states;

  double t_end() const { return t0 + dt * (states.empty() ? 0 : states.size() - 1); }
};

/// Boolean satisfaction of `f` at time t over the sampled signal.
/// Time quantifiers are discretized to the sample grid (interval endpoints
/// are included exactly); predicate values between samples interpolate
/// linearly. Throws HorizonError when t + horizon(f) exceeds the signal.
bool evaluate(const Formula& f, const std::vector<BoundPredicate>& preds,
              const SampledStates& signal, double t);

}  // namespace lfcbf::stl
