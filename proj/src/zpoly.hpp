#pragma once

// Integer polynomials reduced modulo m (m = p or p^k); internal helpers
// shared by the finite-field, p-adic and rational factorization code.

#include "hyperheight/exact_algebra.hpp"

#include <random>
#include <utility>
#include <vector>

namespace hyperheight::detail {

using ZPoly = std::vector<Integer>;  // constant term first, no trailing zeros

void ztrim(ZPoly& a);
int zdeg(const ZPoly& a);
ZPoly zreduce(ZPoly a, const Integer& m);
ZPoly zadd(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly zsub(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly zmul(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly zscale(const ZPoly& a, const Integer& s, const Integer& m);
// Division by a monic divisor modulo m.
std::pair<ZPoly, ZPoly> zdivmod_monic(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly zshift(const ZPoly& a, const Integer& r, const Integer& m);  // a(x + r)
Integer zeval(const ZPoly& a, const Integer& t, const Integer& m);

// Finite field F_p arithmetic (p prime).
Integer fp_inv(const Integer& a, const Integer& p);
ZPoly fp_monic(const ZPoly& a, const Integer& p);
std::pair<ZPoly, ZPoly> fp_divmod(const ZPoly& a, const ZPoly& b, const Integer& p);
ZPoly fp_gcd(ZPoly a, ZPoly b, const Integer& p);
// Returns (g, s, t) with s a + t b = g monic.
struct FpXgcd {
  ZPoly g, s, t;
};
FpXgcd fp_xgcd(const ZPoly& a, const ZPoly& b, const Integer& p);
ZPoly fp_derivative(const ZPoly& a, const Integer& p);
ZPoly fp_powmod(const ZPoly& base, Integer e, const ZPoly& mod, const Integer& p);
// Full factorization into monic irreducibles with multiplicities (input nonzero).
std::vector<std::pair<ZPoly, int>> fp_factor(const ZPoly& a, const Integer& p);
bool fp_is_irreducible(const ZPoly& a, const Integer& p);

// Conversions.
ZPoly to_zpoly(const Poly& f, const Integer& m);  // requires denominators prime to m
Poly to_poly(const ZPoly& a);
// Symmetric representatives in (-m/2, m/2].
Poly to_poly_symmetric(const ZPoly& a, const Integer& m);
Integer ipow(const Integer& b, unsigned long e);

}  // namespace hyperheight::detail
