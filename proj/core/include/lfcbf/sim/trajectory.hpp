#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lfcbf/stl/evaluate.hpp"

namespace lfcbf::sim {

/// Uniformly sampled closed-loop run: states plus the controller and
/// barrier signals logged at every grid point. All arrays share the grid
/// length; switch instants coincide with grid points.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> u;
  std::vector<double> eps;
  std::vector<double> h;      // composite barrier value (NaN when no task)
  std::vector<double> psi1;   // top chain function (equals h for m = 1)
  std::vector<std::uint8_t> switch_flag;
  std::vector<std::uint8_t> singular;  // |a_u| under the detection threshold

  std::size_t size() const { return times.size(); }

  stl::SampledStates sampled_states() const {
    return {t0, dt, states};
  }
};

}  // namespace lfcbf::sim
