#pragma once

#include <Eigen/Dense>
#include <functional>

#include "lfcbf/net/dynamics.hpp"

namespace lfcbf::net {

/// Gradient of the chain function the bound applies to: (x, t) -> d psi/dx.
using PsiGradient =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;

/// Domain sampler: returns successive (x, t) samples from S x [t0, tau_p).
using DomainSampler = std::function<std::pair<Eigen::VectorXd, double>()>;

/// Empirical lower bound on the residual constant delta: the largest
/// magnitude over N samples of the drift terms the leader cannot see,
///
///   sum_{j not in N_n u {n}} (dpsi/dx_j) f_j
///     + sum_{i in N_n} sum_{j not in N_n u {n}} (dpsi/dx_i) f_{i,j},
///
/// i.e. the non-neighbors' full drift plus the neighbors' coupling to
/// them. Returns 0 when the leader neighbors every follower. The value is
/// only used for certificate reporting, never by the controller, and is
/// monotone non-decreasing in N.
double residual_delta_estimate(const Dynamics& dyn, const PsiGradient& grad,
                               const DomainSampler& sample, int n_samples);

}  // namespace lfcbf::net
