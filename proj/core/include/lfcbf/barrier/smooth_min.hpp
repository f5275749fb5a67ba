#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lfcbf/errors.hpp"

namespace lfcbf::barrier {

/// Smooth under-approximation of min(values):
///   -(1/eta) * ln( sum_j exp(-eta * v_j) )
/// computed with a max-shift so large eta*v products cannot overflow.
/// Sandwich bound: min - ln(q)/eta <= smooth_min <= min.
inline double smooth_min(std::span<const double> values, double eta) {
  if (values.empty()) throw Error("smooth_min of an empty list");
  if (!(eta > 0.0)) throw Error("smooth_min requires eta > 0");
  const double m = *std::max_element(
      values.begin(), values.end(),
      [](double a, double b) { return -a < -b; });  // m = min(values)
  double s = 0.0;
  for (double v : values) s += std::exp(-eta * (v - m));
  return m - std::log(s) / eta;
}

/// Softmin weights w_j = exp(-eta v_j) / sum_k exp(-eta v_k).
/// Nonnegative and summing to one; the composite gradient is the
/// weight-averaged operator gradient.
inline std::vector<double> softmin_weights(std::span<const double> values,
                                           double eta) {
  if (values.empty()) throw Error("softmin_weights of an empty list");
  if (!(eta > 0.0)) throw Error("softmin_weights requires eta > 0");
  const double m = *std::min_element(values.begin(), values.end());
  std::vector<double> w(values.size());
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    w[j] = std::exp(-eta * (values[j] - m));
    s += w[j];
  }
  for (double& x : w) x /= s;
  return w;
}

}  // namespace lfcbf::barrier
