#include "lfcbf/stl/predicate.hpp"

#include <algorithm>
#include <cmath>

namespace lfcbf::stl {

int AffineExpr::max_agent() const {
  int m = 0;
  for (const auto& [v, c] : terms) m = std::max(m, v.agent);
  return m;
}

bool AffineExpr::uses_position() const {
  return std::any_of(terms.begin(), terms.end(), [](const auto& t) {
    return t.first.kind == VarRef::Kind::Position;
  });
}

bool AffineExpr::uses_velocity() const {
  return std::any_of(terms.begin(), terms.end(), [](const auto& t) {
    return t.first.kind == VarRef::Kind::Velocity;
  });
}

Predicate::Predicate(int id, std::string text, PredicateShape shape,
                     AffineExpr expr, double bound)
    : id_(id),
      text_(std::move(text)),
      shape_(shape),
      expr_(std::move(expr)),
      bound_(bound) {}

BoundPredicate::BoundPredicate(const Predicate& pred, int order, int n_agents,
                               double abs_smoothing)
    : pred_id_(pred.id()),
      shape_(pred.shape()),
      bound_(pred.bound()),
      constant_(pred.expr().constant),
      dim_(order * n_agents),
      uses_position_(pred.uses_position()),
      smoothing_(abs_smoothing) {
  if (smoothing_ < 0.0) {
    throw Error("abs smoothing radius must be nonnegative");
  }
  coeffs_ = Eigen::VectorXd::Zero(dim_);
  for (const auto& [var, coef] : pred.expr().terms) {
    if (var.agent < 1 || var.agent > n_agents) {
      throw DimensionError("predicate '" + pred.text() + "' references agent " +
                           std::to_string(var.agent) + " in a network of " +
                           std::to_string(n_agents) + " agents");
    }
    if (var.kind == VarRef::Kind::Velocity && order == 1) {
      throw DimensionError("predicate '" + pred.text() +
                           "' references a velocity on a first-order network");
    }
    int idx = (var.kind == VarRef::Kind::Velocity)
                  ? n_agents + var.agent - 1
                  : var.agent - 1;
    coeffs_[idx] += coef;
  }
}

double BoundPredicate::inner(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) {
    throw DimensionError("state dimension " + std::to_string(x.size()) +
                         " does not match predicate dimension " +
                         std::to_string(dim_));
  }
  return coeffs_.dot(x) + constant_;
}

double BoundPredicate::value(const Eigen::VectorXd& x) const {
  const double e = inner(x);
  switch (shape_) {
    case PredicateShape::Affine:
      return e;
    case PredicateShape::AbsUpper:
      return bound_ - std::abs(e);
    case PredicateShape::QuadUpper:
      return bound_ - e * e;
  }
  return 0.0;
}

Eigen::VectorXd BoundPredicate::gradient(const Eigen::VectorXd& x) const {
  const double e = inner(x);
  switch (shape_) {
    case PredicateShape::Affine:
      return coeffs_;
    case PredicateShape::AbsUpper: {
      // sgn(0) = 0 at the kink.
      const double s = (e > 0.0) ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
      return -s * coeffs_;
    }
    case PredicateShape::QuadUpper:
      return -2.0 * e * coeffs_;
  }
  return Eigen::VectorXd::Zero(dim_);
}

double BoundPredicate::barrier_value(const Eigen::VectorXd& x) const {
  if (shape_ == PredicateShape::AbsUpper && smoothing_ > 0.0) {
    const double e = inner(x);
    return bound_ - std::sqrt(e * e + smoothing_ * smoothing_);
  }
  return value(x);
}

Eigen::VectorXd BoundPredicate::barrier_gradient(const Eigen::VectorXd& x) const {
  if (shape_ == PredicateShape::AbsUpper && smoothing_ > 0.0) {
    const double e = inner(x);
    return (-e / std::sqrt(e * e + smoothing_ * smoothing_)) * coeffs_;
  }
  return gradient(x);
}

Eigen::MatrixXd BoundPredicate::barrier_hessian(const Eigen::VectorXd& x) const {
  switch (shape_) {
    case PredicateShape::QuadUpper:
      return -2.0 * (coeffs_ * coeffs_.transpose());
    case PredicateShape::AbsUpper:
      if (smoothing_ > 0.0) {
        const double e = inner(x);
        const double s2 = e * e + smoothing_ * smoothing_;
        const double scale = -smoothing_ * smoothing_ / (s2 * std::sqrt(s2));
        return scale * (coeffs_ * coeffs_.transpose());
      }
      break;
    case PredicateShape::Affine:
      break;
  }
  return Eigen::MatrixXd::Zero(dim_, dim_);
}

int PredicateTable::intern(std::string text, PredicateShape shape,
                           AffineExpr expr, double bound) {
  for (const auto& p : preds_) {
    if (p.text() == text) return p.id();
  }
  int id = static_cast<int>(preds_.size());
  preds_.emplace_back(id, std::move(text), shape, std::move(expr), bound);
  return id;
}

int PredicateTable::max_agent() const {
  int m = 0;
  for (const auto& p : preds_) m = std::max(m, p.max_agent());
  return m;
}

std::vector<BoundPredicate> PredicateTable::bind(int order, int n_agents,
                                                 double abs_smoothing) const {
  std::vector<BoundPredicate> out;
  out.reserve(preds_.size());
  for (const auto& p : preds_) {
    out.emplace_back(p, order, n_agents, abs_smoothing);
  }
  return out;
}

}  // namespace lfcbf::stl
