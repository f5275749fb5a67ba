#include "lfcbf/stl/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace lfcbf::stl {

namespace {

bool is_temporal(NodeKind k) {
  return k == NodeKind::Always || k == NodeKind::Eventually ||
         k == NodeKind::Until;
}

bool state_only(const Node* n) {
  if (!n) return true;
  if (is_temporal(n->kind)) return false;
  return state_only(n->left.get()) && state_only(n->right.get());
}

double node_horizon(const Node* n) {
  if (!n) return 0.0;
  switch (n->kind) {
    case NodeKind::True:
    case NodeKind::Pred:
      return 0.0;
    case NodeKind::And:
      return std::max(node_horizon(n->left.get()), node_horizon(n->right.get()));
    case NodeKind::Always:
    case NodeKind::Eventually:
    case NodeKind::Until:
      return n->b;
  }
  return 0.0;
}

std::string fmt_time(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void print_node(const Node* n, const PredicateTable& table, std::ostream& os) {
  if (!n) return;
  switch (n->kind) {
    case NodeKind::True:
      os << "TRUE";
      break;
    case NodeKind::Pred:
      os << table.at(n->pred_id).text();
      break;
    case NodeKind::And:
      print_node(n->left.get(), table, os);
      os << " AND ";
      print_node(n->right.get(), table, os);
      break;
    case NodeKind::Always:
    case NodeKind::Eventually:
      os << (n->kind == NodeKind::Always ? "G[" : "F[") << fmt_time(n->a)
         << "," << fmt_time(n->b) << "](";
      print_node(n->left.get(), table, os);
      os << ")";
      break;
    case NodeKind::Until:
      os << "(";
      print_node(n->left.get(), table, os);
      os << ") U[" << fmt_time(n->a) << "," << fmt_time(n->b) << "] (";
      print_node(n->right.get(), table, os);
      os << ")";
      break;
  }
}

bool nodes_identical(const Node* a, const Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->pred_id != b->pred_id || a->a != b->a ||
      a->b != b->b) {
    return false;
  }
  return nodes_identical(a->left.get(), b->left.get()) &&
         nodes_identical(a->right.get(), b->right.get());
}

}  // namespace

bool Formula::is_state_formula() const { return state_only(root_.get()); }

double Formula::horizon() const { return node_horizon(root_.get()); }

std::vector<Formula> Formula::top_conjuncts() const {
  std::vector<Formula> out;
  std::function<void(const std::shared_ptr<const Node>&)> walk =
      [&](const std::shared_ptr<const Node>& n) {
        if (!n) return;
        if (n->kind == NodeKind::And) {
          walk(n->left);
          walk(n->right);
        } else {
          out.emplace_back(n);
        }
      };
  walk(root_);
  return out;
}

std::string Formula::to_string(const PredicateTable& table) const {
  std::ostringstream os;
  print_node(root_.get(), table, os);
  return os.str();
}

bool Formula::identical(const Formula& other) const {
  return nodes_identical(root_.get(), other.root_.get());
}

FormulaOps collect_ops(const Formula& f) {
  FormulaOps ops;
  std::function<void(const std::shared_ptr<const Node>&)> walk =
      [&](const std::shared_ptr<const Node>& n) {
        if (!n) return;
        switch (n->kind) {
          case NodeKind::And:
            walk(n->left);
            walk(n->right);
            break;
          case NodeKind::Always:
          case NodeKind::Eventually:
            ops.temporal.push_back({n->kind, n->a, n->b, n->left, nullptr});
            break;
          case NodeKind::Until:
            ops.temporal.push_back({n->kind, n->a, n->b, n->right, n->left});
            break;
          case NodeKind::True:
            break;
          case NodeKind::Pred:
            ops.bare_state.push_back(n);
            break;
        }
      };
  walk(f.root_ptr());
  return ops;
}

}  // namespace lfcbf::stl
