#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lfcbf/stl/predicate.hpp"

namespace lfcbf::stl {

enum class NodeKind { True, Pred, And, Always, Eventually, Until };

/// Immutable AST node for the supported fragment:
///   psi := TRUE | pred | psi AND psi
///   phi := psi | G[a,b](psi) | F[a,b](psi) | psi U[a,b] psi | phi AND phi
/// Temporal operators never nest.
struct Node {
  NodeKind kind = NodeKind::True;
  int pred_id = -1;                    // Pred
  double a = 0.0, b = 0.0;             // temporal interval, seconds
  std::shared_ptr<const Node> left;    // And/Until left, temporal child
  std::shared_ptr<const Node> right;   // And/Until right
};

class Formula {
 public:
  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  std::shared_ptr<const Node> root_ptr() const { return root_; }
  bool empty() const { return root_ == nullptr; }

  /// True when no temporal operator appears (a psi-class formula).
  bool is_state_formula() const;

  /// Largest lookahead needed to decide satisfaction at time t.
  double horizon() const;

  /// Splits top-level conjunctions, preserving order. A non-And root
  /// yields a single element.
  std::vector<Formula> top_conjuncts() const;

  std::string to_string(const PredicateTable& table) const;

  bool identical(const Formula& other) const;

 private:
  std::shared_ptr<const Node> root_;
};

/// One temporal obligation of a formula, used to derive barriers and the
/// switching schedule. Until contributes a single entry carrying both
/// operands.
struct TemporalOp {
  NodeKind kind = NodeKind::Always;    // Always, Eventually or Until
  double a = 0.0, b = 0.0;
  std::shared_ptr<const Node> child;   // psi under G/F, or Until?s right
  std::shared_ptr<const Node> hold;    // Until?s left operand, else null
};

/// Collects the formula's temporal operators in syntactic order. A bare
/// psi-class conjunct (allowed by the grammar) is reported as an Always
/// over a window chosen by the caller, so it is returned separately.
struct FormulaOps {
  std::vector<TemporalOp> temporal;
  std::vector<std::shared_ptr<const Node>> bare_state;  // psi conjuncts
};

FormulaOps collect_ops(const Formula& f);

}  // namespace lfcbf::stl
