#pragma once

#include <cmath>
#include <optional>

#include "lfcbf/errors.hpp"

namespace lfcbf::control {

enum class InfoMode { FullInfo, PartialInfo };

/// Gains of the fixed-time barrier inequality
///   a_u u + eps >= -(drift terms) - dpsi/dt
///                  - alpha sgn(psi)|psi|^gamma1 - beta sgn(psi)|psi|^gamma2.
///
/// Either gamma1/gamma2 are given directly (full-information use), or they
/// derive from mu > 1 as gamma1 = 1 - 1/mu, gamma2 = 1 + 1/mu. The mu
/// parameterization is mandatory in partial-information mode and for the
/// analytic certificates.
struct ControllerParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma1 = 0.5;
  double gamma2 = 1.5;
  std::optional<double> mu;  // set when the mu parameterization is used
  double k = 2.0;            // only enters the boundary-branch certificate
  InfoMode mode = InfoMode::FullInfo;
  int cbf_order = 1;     // m
  bool qp_slack = true;  // a_eps = 1 (QP mode) vs 0 (raw inequality)

  static ControllerParams from_mu(double alpha, double beta, double mu,
                                  double k, InfoMode mode, int cbf_order,
                                  bool qp_slack) {
    ControllerParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.mu = mu;
    p.gamma1 = 1.0 - 1.0 / mu;
    p.gamma2 = 1.0 + 1.0 / mu;
    p.k = k;
    p.mode = mode;
    p.cbf_order = cbf_order;
    p.qp_slack = qp_slack;
    p.validate();
    return p;
  }

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw Error("controller gains alpha, beta must be positive");
    if (!(gamma1 > 0.0 && gamma1 < 1.0))
      throw Error("gamma1 must lie in (0,1)");
    if (!(gamma2 > 1.0)) throw Error("gamma2 must exceed 1");
    if (mu && !(*mu > 1.0)) throw Error("mu must exceed 1");
    if (!(k > 1.0)) throw Error("k must exceed 1");
    if (mode == InfoMode::PartialInfo && !mu) {
      throw Error("partial-information mode requires the mu "
                  "parameterization of gamma1, gamma2");
    }
    if (cbf_order != 1 && cbf_order != 2)
      throw Error("cbf order must be 1 or 2");
  }

  /// sgn(y)|y|^g with sgn(0) = 0.
  static double sgn_pow(double y, double g) {
    if (y == 0.0) return 0.0;
    return (y > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(y), g);
  }
};

}  // namespace lfcbf::control
