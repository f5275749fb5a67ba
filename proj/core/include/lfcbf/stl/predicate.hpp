#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lfcbf/errors.hpp"

namespace lfcbf::stl {

/// A single variable reference inside a predicate expression.
/// Agents are 1-based in the concrete syntax (p1, v3, x2); `x` is an
/// alias for `p` on first-order networks.
struct VarRef {
  enum class Kind { Position, Velocity } kind = Kind::Position;
  int agent = 1;

  bool operator==(const VarRef&) const = default;
};

/// Affine expression e(x) = sum_i coef_i * var_i + constant.
struct AffineExpr {
  std::vector<std::pair<VarRef, double>> terms;
  double constant = 0.0;

  int max_agent() const;
  bool uses_position() const;
  bool uses_velocity() const;
};

/// Shape of the concave normal form h(x) >= 0 a comparison rewrites to.
enum class PredicateShape {
  Affine,    // h = e(x)                  from  e <= c  or  e >= c
  AbsUpper,  // h = c - |e(x)|            from  abs(e) <= c
  QuadUpper, // h = c - e(x)^2            from  sq(e) <= c
};

/// A predicate in concave normal form. Built by the parser, bound to a
/// concrete state layout before evaluation.
class Predicate {
 public:
  Predicate(int id, std::string text, PredicateShape shape, AffineExpr expr,
            double bound);

  int id() const { return id_; }
  const std::string& text() const { return text_; }
  PredicateShape shape() const { return shape_; }
  const AffineExpr& expr() const { return expr_; }
  double bound() const { return bound_; }

  /// Concave by construction; kept as an explicit flag so the invariant
  /// is checkable at the boundary.
  bool concave() const { return true; }

  int max_agent() const { return expr_.max_agent(); }
  bool uses_position() const { return expr_.uses_position(); }
  bool uses_velocity() const { return expr_.uses_velocity(); }

 private:
  int id_;
  std::string text_;
  PredicateShape shape_;
  AffineExpr expr_;
  double bound_;
};

/// A predicate bound to a stacked-state layout. First-order networks
/// stack x = (p_1..p_n); second-order stack x = (p_1..p_n, v_1..v_n).
///
/// Two evaluation routes coexist:
///  - value/gradient: the exact predicate, used by the STL semantics.
///    Subgradient convention at the |.| kink: sgn(0) = 0.
///  - barrier_value/gradient/hessian: the barrier-side form. Higher-order
///    barrier chains need h of class C^m, which the exact |.| is not, so
///    abs predicates use the concave under-approximation
///    c - sqrt(e^2 + s^2) with smoothing radius s. It never exceeds the
///    exact predicate, so barrier nonnegativity still implies the exact
///    clause. s = 0 keeps the exact kink.
class BoundPredicate {
 public:
  BoundPredicate(const Predicate& pred, int order, int n_agents,
                 double abs_smoothing = 0.0);

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  double barrier_value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd barrier_gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd barrier_hessian(const Eigen::VectorXd& x) const;

  int dim() const { return dim_; }
  int pred_id() const { return pred_id_; }
  bool uses_position() const { return uses_position_; }
  double abs_smoothing() const { return smoothing_; }

 private:
  double inner(const Eigen::VectorXd& x) const;  // e(x)

  int pred_id_;
  PredicateShape shape_;
  double bound_;
  double constant_;
  Eigen::VectorXd coeffs_;  // dense over the stacked dimension
  int dim_;
  bool uses_position_;
  double smoothing_;
};

/// Registry of the predicates referenced by a formula. Parsing interns
/// predicates by canonical text, so identical comparisons share an id.
class PredicateTable {
 public:
  /// Returns the id, interning the predicate if it is new.
  int intern(std::string text, PredicateShape shape, AffineExpr expr,
             double bound);

  const Predicate& at(int id) const { return preds_.at(id); }
  std::size_t size() const { return preds_.size(); }

  int max_agent() const;

  /// Binds every predicate to a concrete layout. Throws DimensionError if
  /// a predicate references an agent outside 1..n or a velocity on a
  /// first-order network.
  std::vector<BoundPredicate> bind(int order, int n_agents,
                                   double abs_smoothing = 0.0) const;

 private:
  std::vector<Predicate> preds_;
};

}  // namespace lfcbf::stl
