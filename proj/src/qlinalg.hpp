#pragma once

// Small dense linear algebra over Q used by the place and local modules.

#include "hyperheight/exact_algebra.hpp"

#include <vector>

namespace hyperheight::detail {

using QMatrix = std::vector<std::vector<Rational>>;  // row major

// Matrix of multiplication by b on Q[x]/(a) in the basis 1, x, ..., x^(d-1);
// column i holds the coefficients of x^i b mod a.
QMatrix multiplication_matrix(const Poly& b, const Poly& a);
// det(T I - M).
Poly charpoly(const QMatrix& M);
// Rank by exact elimination.
int rank(QMatrix M);
// Solves A x = r for square nonsingular A; throws ValidationError when singular.
std::vector<Rational> solve(QMatrix A, std::vector<Rational> r);

}  // namespace hyperheight::detail
