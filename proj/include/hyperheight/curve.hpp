#pragma once

#include "hyperheight/exact_algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperheight {

// y^2 = f(x) with f monic, integral, squarefree, of degree 2g + 1.
struct HyperellipticCurve {
  Poly f;
  int genus = 0;
  Integer discriminant;

  std::string id() const;
};

HyperellipticCurve make_curve(const std::vector<Rational>& coeffs);  // constant term first
HyperellipticCurve make_curve(const Poly& f);

// D' - deg(a) * infinity with D' = {a(x) = 0, y = b(x)}.
struct MumfordDivisor {
  Poly a = Poly::constant(1);
  Poly b;

  static MumfordDivisor identity() { return {}; }
  bool is_identity() const { return a.degree() == 0; }
  int degree() const { return a.degree(); }
  std::string to_string() const;
  friend bool operator==(const MumfordDivisor& l, const MumfordDivisor& r) { return l.a == r.a && l.b == r.b; }
};

// Throws ValidationError unless D is a reduced Mumford divisor on C.
void validate_divisor(const MumfordDivisor& D, const HyperellipticCurve& C);
MumfordDivisor make_divisor(const Poly& a, const Poly& b, const HyperellipticCurve& C);
// Mumford form of P - infinity for an affine rational point P.
MumfordDivisor point_divisor(const Rational& x, const Rational& y, const HyperellipticCurve& C);

MumfordDivisor cantor_add(const MumfordDivisor& D1, const MumfordDivisor& D2, const HyperellipticCurve& C);
MumfordDivisor involution(const MumfordDivisor& D);
MumfordDivisor multiply(const MumfordDivisor& D, long n, const HyperellipticCurve& C);

bool has_weierstrass_support(const MumfordDivisor& D, const HyperellipticCurve& C);

struct WeierstrassFree {
  MumfordDivisor divisor;
  int multiplier = 1;
};

constexpr int kMaxMultiplier = 16;
WeierstrassFree ensure_weierstrass_free(const MumfordDivisor& D, const HyperellipticCurve& C);
// Smallest n <= limit with n D = 0, if any.
std::optional<int> torsion_order(const MumfordDivisor& D, const HyperellipticCurve& C, int limit = kMaxMultiplier);

// One block of a formal divisor: an irreducible-over-Q set of points
// {a = 0, y = b(x)} or the full fibre {a = 0} (both sheets).
struct DivisorTerm {
  enum class Kind { Point, Fibre };
  Kind kind = Kind::Point;
  Poly a;
  Poly b;  // unused for fibres
  Rational coefficient;

  int degree() const { return kind == Kind::Point ? a.degree() : 2 * a.degree(); }
};

struct FormalDivisor {
  std::vector<DivisorTerm> terms;
  Rational infinity_coefficient;

  Rational degree() const;
  std::string to_string() const;
};

// D' - d infinity split into irreducible blocks.
FormalDivisor to_formal(const MumfordDivisor& D);
// Checks that the terms are well formed on C (a | b^2 - f, a monic irreducible).
void validate_formal(const FormalDivisor& D, const HyperellipticCurve& C);
// True when the supports share a point over the algebraic closure.
bool supports_meet(const FormalDivisor& D, const FormalDivisor& E);

FormalDivisor construct_E(const MumfordDivisor& D, const Rational& lambda, const HyperellipticCurve& C);
// General form: for D = sum c_i X_i + c_inf inf, E = sum c_i inv(X_i) + (c_inf / 2) x^*(lambda).
FormalDivisor construct_E(const FormalDivisor& D, const Rational& lambda, const HyperellipticCurve& C);
Rational choose_lambda(const MumfordDivisor& D, const HyperellipticCurve& C, std::uint64_t seed = 0);
Rational choose_lambda(const FormalDivisor& D, const HyperellipticCurve& C, std::uint64_t seed = 0);

}  // namespace hyperheight
