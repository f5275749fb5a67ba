#include "lfcbf/stl/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>

namespace lfcbf::stl {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

/// Canonical text of the source-side affine expression: variable terms in
/// order of appearance, constant last. Stable under reparsing.
std::string canon_expr(const AffineExpr& e) {
  std::string out;
  bool first = true;
  for (const auto& [var, coef] : e.terms) {
    double c = coef;
    if (first) {
      if (c < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += (c < 0) ? " - " : " + ";
      c = std::abs(c);
    }
    if (c != 1.0) out += fmt_num(c) + "*";
    out += (var.kind == VarRef::Kind::Position ? "p" : "v");
    out += std::to_string(var.agent);
    first = false;
  }
  if (e.constant != 0.0 || first) {
    if (first) {
      out += fmt_num(e.constant);
    } else {
      out += (e.constant < 0) ? " - " : " + ";
      out += fmt_num(std::abs(e.constant));
    }
  }
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, PredicateTable& table)
      : s_(text), table_(table) {}

  Formula run() {
    auto node = parse_phi();
    skip_ws();
    if (!eof()) fail("unexpected trailing input");
    return Formula(std::move(node));
  }

 private:
  using NodePtr = std::shared_ptr<const Node>;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  bool lookahead_kw(const char* kw) {
    skip_ws();
    std::size_t len = std::char_traits<char>::length(kw);
    if (s_.compare(pos_, len, kw) != 0) return false;
    // Keywords made of letters must not run into an identifier.
    if (std::isalpha(static_cast<unsigned char>(kw[len - 1])) &&
        pos_ + len < s_.size() &&
        std::isalnum(static_cast<unsigned char>(s_[pos_ + len]))) {
      return false;
    }
    return true;
  }

  bool match_kw(const char* kw) {
    if (!lookahead_kw(kw)) return false;
    pos_ += std::char_traits<char>::length(kw);
    return true;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double parse_number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    if (!std::isfinite(v)) fail("non-finite number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  bool lookahead_var() {
    skip_ws();
    char c = peek();
    if (c != 'p' && c != 'v' && c != 'x') return false;
    return pos_ + 1 < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
  }

  VarRef parse_var() {
    skip_ws();
    char c = peek();
    VarRef var;
    var.kind = (c == 'v') ? VarRef::Kind::Velocity : VarRef::Kind::Position;
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected agent index after variable letter");
    int idx = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      idx = idx * 10 + (peek() - '0');
      ++pos_;
    }
    if (idx < 1) fail("agent indices are 1-based");
    var.agent = idx;
    return var;
  }

  // expr := ['+'|'-'] term (('+'|'-') term)*, term := num ['*' var] | var ['*' num]
  AffineExpr parse_expr() {
    AffineExpr e;
    double sign = 1.0;
    skip_ws();
    if (peek() == '-') {
      sign = -1.0;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    parse_term(e, sign);
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      parse_term(e, c == '-' ? -1.0 : 1.0);
    }
    return e;
  }

  void parse_term(AffineExpr& e, double sign) {
    skip_ws();
    if (lookahead_var()) {
      VarRef var = parse_var();
      double coef = 1.0;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        coef = parse_number();
      }
      e.terms.emplace_back(var, sign * coef);
      return;
    }
    double v = parse_number();
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      if (!lookahead_var()) fail("expected a variable after '*'");
      VarRef var = parse_var();
      e.terms.emplace_back(var, sign * v);
    } else {
      e.constant += sign * v;
    }
  }

  enum class Cmp { Le, Ge };

  Cmp parse_cmp() {
    skip_ws();
    if (s_.compare(pos_, 2, "<=") == 0) {
      pos_ += 2;
      return Cmp::Le;
    }
    if (s_.compare(pos_, 2, ">=") == 0) {
      pos_ += 2;
      return Cmp::Ge;
    }
    fail("expected '<=' or '>='");
  }

  NodePtr parse_pred() {
    skip_ws();
    if (match_kw("abs")) {
      expect('(');
      AffineExpr e = parse_expr();
      expect(')');
      Cmp cmp = parse_cmp();
      double c = parse_number();
      if (cmp == Cmp::Ge) {
        throw FormulaError("'abs(e) >= c' is not concave; only upper bounds "
                           "on |e| are supported");
      }
      std::string text = "abs(" + canon_expr(e) + ") <= " + fmt_num(c);
      int id = table_.intern(std::move(text), PredicateShape::AbsUpper,
                             std::move(e), c);
      return make_pred(id);
    }
    if (match_kw("sq")) {
      expect('(');
      AffineExpr e = parse_expr();
      expect(')');
      Cmp cmp = parse_cmp();
      double c = parse_number();
      if (cmp == Cmp::Ge) {
        throw FormulaError("'sq(e) >= c' is not concave; only upper bounds "
                           "on e^2 are supported");
      }
      std::string text = "sq(" + canon_expr(e) + ") <= " + fmt_num(c);
      int id = table_.intern(std::move(text), PredicateShape::QuadUpper,
                             std::move(e), c);
      return make_pred(id);
    }
    AffineExpr e = parse_expr();
    Cmp cmp = parse_cmp();
    double c = parse_number();
    std::string text = canon_expr(e) + (cmp == Cmp::Le ? " <= " : " >= ") +
                       fmt_num(c);
    // Rewrite to concave normal form h >= 0.
    AffineExpr h = std::move(e);
    if (cmp == Cmp::Le) {
      for (auto& [var, coef] : h.terms) coef = -coef;
      h.constant = c - h.constant;
    } else {
      h.constant -= c;
    }
    int id =
        table_.intern(std::move(text), PredicateShape::Affine, std::move(h), 0.0);
    return make_pred(id);
  }

  static NodePtr make_pred(int id) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Pred;
    n->pred_id = id;
    return n;
  }

  std::pair<double, double> parse_interval() {
    expect('[');
    double a = parse_number();
    expect(',');
    double b = parse_number();
    expect(']');
    if (a < 0.0)
      throw FormulaError("interval start must be nonnegative, got [" +
                         fmt_num(a) + "," + fmt_num(b) + "]");
    if (a > b)
      throw FormulaError("empty interval: a > b in [" + fmt_num(a) + "," +
                         fmt_num(b) + "]");
    return {a, b};
  }

  bool lookahead_temporal() {
    skip_ws();
    char c = peek();
    if (c != 'G' && c != 'F') return false;
    std::size_t save = pos_;
    ++pos_;
    skip_ws();
    bool bracket = peek() == '[';
    pos_ = save;
    return bracket;
  }

  bool lookahead_until() {
    skip_ws();
    if (peek() != 'U') return false;
    std::size_t save = pos_;
    ++pos_;
    skip_ws();
    bool bracket = peek() == '[';
    pos_ = save;
    return bracket;
  }

  // psi-class formulas: no temporal operators allowed inside.
  NodePtr parse_psi() {
    NodePtr left = parse_psi_term();
    while (match_kw("AND")) {
      NodePtr right = parse_psi_term();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::And;
      n->left = std::move(left);
      n->right = std::move(right);
      left = std::move(n);
    }
    if (lookahead_until() || lookahead_temporal()) {
      throw FormulaError("nested temporal operator: temporal operators may "
                         "only contain state formulas");
    }
    return left;
  }

  NodePtr parse_psi_term() {
    skip_ws();
    if (lookahead_temporal()) {
      throw FormulaError("nested temporal operator: temporal operators may "
                         "only contain state formulas");
    }
    if (match_kw("TRUE")) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::True;
      return n;
    }
    if (peek() == '(') {
      ++pos_;
      NodePtr inner = parse_psi();
      expect(')');
      return inner;
    }
    return parse_pred();
  }

  NodePtr parse_phi() {
    NodePtr left = parse_phi_term();
    while (match_kw("AND")) {
      NodePtr right = parse_phi_term();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::And;
      n->left = std::move(left);
      n->right = std::move(right);
      left = std::move(n);
    }
    return left;
  }

  NodePtr maybe_until(NodePtr left) {
    if (!lookahead_until()) return left;
    if (!Formula(left).is_state_formula()) {
      throw FormulaError("nested temporal operator: the left operand of U "
                         "must be a state formula");
    }
    ++pos_;  // consume 'U'
    auto [a, b] = parse_interval();
    NodePtr right = parse_psi_unit();
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Until;
    n->a = a;
    n->b = b;
    n->left = std::move(left);
    n->right = std::move(right);
    return n;
  }

  NodePtr parse_psi_unit() {
    skip_ws();
    if (match_kw("TRUE")) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::True;
      return n;
    }
    if (peek() == '(') {
      ++pos_;
      NodePtr inner = parse_psi();
      expect(')');
      return inner;
    }
    return parse_pred();
  }

  NodePtr parse_phi_term() {
    skip_ws();
    if (lookahead_temporal()) {
      char op = peek();
      ++pos_;
      auto [a, b] = parse_interval();
      expect('(');
      NodePtr sub = parse_psi();
      expect(')');
      auto n = std::make_shared<Node>();
      n->kind = (op == 'G') ? NodeKind::Always : NodeKind::Eventually;
      n->a = a;
      n->b = b;
      n->left = std::move(sub);
      return n;
    }
    if (match_kw("TRUE")) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::True;
      return maybe_until(std::move(n));
    }
    if (peek() == '(') {
      std::size_t save = pos_;
      ++pos_;
      NodePtr inner = parse_phi();
      expect(')');
      if (lookahead_until()) {
        if (!Formula(inner).is_state_formula()) {
          pos_ = save;
          throw FormulaError("nested temporal operator: the left operand of "
                             "U must be a state formula");
        }
        return maybe_until(std::move(inner));
      }
      return inner;
    }
    NodePtr pred = parse_pred();
    return maybe_until(std::move(pred));
  }

  const std::string& s_;
  PredicateTable& table_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text, PredicateTable& table) {
  return Parser(text, table).run();
}

}  // namespace lfcbf::stl
