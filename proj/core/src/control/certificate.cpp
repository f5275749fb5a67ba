#include "lfcbf/control/certificate.hpp"

#include <cmath>

namespace lfcbf::control {

namespace {
constexpr double kBranchTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

Certificate fixed_time_bound(const ControllerParams& params, double delta) {
  params.validate();
  if (!params.mu) {
    throw Error("certificates require the mu parameterization of gamma1, "
                "gamma2");
  }
  if (delta < 0.0) throw Error("delta must be nonnegative");

  const double a = params.alpha;
  const double b = params.beta;
  const double mu = *params.mu;
  const double disc = delta * delta - 4.0 * a * b;

  Certificate cert;
  cert.delta = delta;
  if (std::abs(disc) <= kBranchTol) {
    cert.branch = 2;
    cert.T = mu / std::sqrt(a * b) * (1.0 / (params.k - 1.0));
    cert.eps_max = std::pow(params.k, mu) * std::pow(b / a, mu / 2.0);
  } else if (disc > 0.0) {
    cert.branch = 1;
    const double sq = std::sqrt(disc);
    cert.root_b = (delta - sq) / (2.0 * a);
    cert.root_c = (delta + sq) / (2.0 * a);
    cert.T = mu / (a * (cert.root_c - cert.root_b)) *
             std::log(std::abs(1.0 + cert.root_c) / std::abs(1.0 + cert.root_b));
    cert.eps_max = std::pow(cert.root_c, mu);
  } else {
    cert.branch = 3;
    cert.k1 = std::sqrt((4.0 * a * b - delta * delta) / (4.0 * a * a));
    cert.k2 = -delta / std::sqrt(4.0 * a * b - delta * delta);
    cert.T = mu / (a * cert.k1) * (kPi / 2.0 - std::atan(cert.k2));
    cert.eps_max = delta / (2.0 * std::sqrt(a * b));
  }
  return cert;
}

double epsilon_max_bound(const ControllerParams& params, double delta) {
  return fixed_time_bound(params, delta).eps_max;
}

double lemma_time_bound(const ControllerParams& params) {
  params.validate();
  return 1.0 / (params.alpha * (1.0 - params.gamma1)) +
         1.0 / (params.beta * (params.gamma2 - 1.0));
}

}  // namespace lfcbf::control
