#pragma once

#include <string>

#include "lfcbf/stl/formula.hpp"
#include "lfcbf/stl/predicate.hpp"

namespace lfcbf::stl {

/// Parses the ASCII formula grammar
///
///   phi  := TRUE | pred | phi AND phi | G[a,b](psi) | F[a,b](psi)
///         | psi U[a,b] psi | (phi)
///   psi  := TRUE | pred | psi AND psi | (psi)
///   pred := expr <= c | expr >= c | abs(expr) <= c | sq(expr) <= c
///   expr := affine combination of p<i>, v<i>, x<i> and numeric literals
///
/// Comparisons are rewritten to concave normal form h >= 0; non-concave
/// comparisons (abs/sq with >=) are rejected. Predicates are interned
/// into `table`.
///
/// Throws ParseError (syntax, with position), FormulaError (interval a > b,
/// nested temporal operator, non-concave predicate).
Formula parse_formula(const std::string& text, PredicateTable& table);

}  // namespace lfcbf::stl
