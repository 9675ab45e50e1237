#include "hyperheight/curve.hpp"

#include "hyperheight/errors.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace hyperheight {

std::string HyperellipticCurve::id() const { return "y^2 = " + f.to_string(); }

HyperellipticCurve make_curve(const Poly& f) {
  int n = f.degree();
  if (n < 3) throw ValidationError("curve polynomial must have degree at least 3");
  if (n % 2 == 0) throw ValidationError("curve polynomial must have odd degree, got " + std::to_string(n));
  if (f.lead() != 1) throw ValidationError("curve polynomial must be monic");
  if (!f.is_integral()) throw ValidationError("curve polynomial must have integer coefficients");
  if (gcd(f, f.derivative()).degree() > 0) throw ValidationError("curve polynomial is not squarefree");
  HyperellipticCurve c;
  c.f = f;
  c.genus = (n - 1) / 2;
  c.discriminant = discriminant(f).get_num();
  return c;
}

HyperellipticCurve make_curve(const std::vector<Rational>& coeffs) {
  if (coeffs.empty()) throw ValidationError("empty coefficient list");
  if (coeffs.back() == 0) throw ValidationError("leading coefficient is zero");
  return make_curve(Poly(coeffs));
}

std::string MumfordDivisor::to_string() const { return "(" + a.to_string() + ", " + b.to_string() + ")"; }

void validate_divisor(const MumfordDivisor& D, const HyperellipticCurve& C) {
  if (D.a.is_zero() || !D.a.is_monic()) throw ValidationError("Mumford polynomial a must be monic");
  if (D.a.degree() > C.genus)
    throw ValidationError("Mumford divisor degree " + std::to_string(D.a.degree()) + " exceeds the genus");
  if (!D.b.is_zero() && D.b.degree() >= D.a.degree()) throw ValidationError("Mumford polynomial b must have deg b < deg a");
  if (!((D.b * D.b - C.f) % D.a).is_zero()) throw ValidationError("a does not divide b^2 - f");
}

MumfordDivisor make_divisor(const Poly& a, const Poly& b, const HyperellipticCurve& C) {
  MumfordDivisor D{a, b};
  validate_divisor(D, C);
  return D;
}

MumfordDivisor point_divisor(const Rational& x, const Rational& y, const HyperellipticCurve& C) {
  if (y * y != C.f(x)) throw ValidationError("point (" + x.get_str() + ", " + y.get_str() + ") is not on the curve");
  return {Poly(std::vector<Rational>{-x, 1}), Poly::constant(y)};
}

MumfordDivisor cantor_add(const MumfordDivisor& D1, const MumfordDivisor& D2, const HyperellipticCurve& C) {
  const Poly &a1 = D1.a, &a2 = D2.a, &b1 = D1.b, &b2 = D2.b;
  ExtendedGcd g0 = ext_gcd(a1, a2);
  ExtendedGcd g1 = ext_gcd(g0.g, b1 + b2);
  Poly s1 = g1.s * g0.s, s2 = g1.s * g0.t, s3 = g1.t;
  const Poly& d = g1.g;
  Poly a = (a1 * a2) / (d * d);
  Poly b = ((s1 * a1 * b2 + s2 * a2 * b1 + s3 * (b1 * b2 + C.f)) / d) % a;
  while (a.degree() > C.genus) {
    a = ((C.f - b * b) / a).monic();
    b = (-b) % a;
  }
  a = a.monic();
  b = b % a;
  return {a, b};
}

MumfordDivisor involution(const MumfordDivisor& D) { return {D.a, (-D.b) % D.a}; }

MumfordDivisor multiply(const MumfordDivisor& D, long n, const HyperellipticCurve& C) {
  MumfordDivisor base = n < 0 ? involution(D) : D;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  MumfordDivisor acc;
  while (k > 0) {
    if (k & 1) acc = cantor_add(acc, base, C);
    k >>= 1;
    if (k > 0) base = cantor_add(base, base, C);
  }
  return acc;
}

bool has_weierstrass_support(const MumfordDivisor& D, const HyperellipticCurve& C) {
  if (D.is_identity()) return false;
  Poly g = gcd(D.a, D.b);
  if (g.degree() < 1) return false;
  return gcd(g, C.f).degree() > 0;
}

std::optional<int> torsion_order(const MumfordDivisor& D, const HyperellipticCurve& C, int limit) {
  MumfordDivisor acc;
  for (int n = 1; n <= limit; ++n) {
    acc = cantor_add(acc, D, C);
    if (acc.is_identity()) return n;
  }
  return std::nullopt;
}

WeierstrassFree ensure_weierstrass_free(const MumfordDivisor& D, const HyperellipticCurve& C) {
  if (D.is_identity()) throw ValidationError("the identity divisor has no Weierstrass-free multiple");
  MumfordDivisor acc;
  for (int n = 1; n <= kMaxMultiplier; ++n) {
    acc = cantor_add(acc, D, C);
    if (!acc.is_identity() && !has_weierstrass_support(acc, C)) return {acc, n};
  }
  throw ValidationError("every multiple up to " + std::to_string(kMaxMultiplier) +
                        " of the divisor meets a Weierstrass point (degenerate input)");
}

Rational FormalDivisor::degree() const {
  Rational d = infinity_coefficient;
  for (const auto& t : terms) d += t.coefficient * t.degree();
  return d;
}

std::string FormalDivisor::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto coeff = [&](const Rational& c) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational a = abs(c);
    if (a != 1) os << a.get_str() << "*";
  };
  for (const auto& t : terms) {
    coeff(t.coefficient);
    if (t.kind == DivisorTerm::Kind::Point)
      os << "[" << t.a.to_string() << ", y = " << t.b.to_string() << "]";
    else
      os << "fibre[" << t.a.to_string() << "]";
  }
  if (infinity_coefficient != 0) {
    coeff(infinity_coefficient);
    os << "inf";
  }
  if (first) os << "0";
  return os.str();
}

FormalDivisor to_formal(const MumfordDivisor& D) {
  FormalDivisor out;
  if (D.is_identity()) return out;
  for (const auto& [ai, m] : factor_over_q(D.a).factors) {
    DivisorTerm t;
    t.kind = DivisorTerm::Kind::Point;
    t.a = ai;
    t.b = D.b % ai;
    t.coefficient = m;
    out.terms.push_back(std::move(t));
  }
  out.infinity_coefficient = -D.a.degree();
  return out;
}

void validate_formal(const FormalDivisor& D, const HyperellipticCurve& C) {
  for (size_t i = 0; i < D.terms.size(); ++i) {
    const auto& t = D.terms[i];
    std::string where = "term " + std::to_string(i) + ": ";
    if (t.coefficient == 0) throw ValidationError(where + "zero coefficient");
    if (t.a.degree() < 1 || !t.a.is_monic()) throw ValidationError(where + "polynomial must be monic and nonconstant");
    auto fac = factor_over_q(t.a);
    if (fac.factors.size() != 1 || fac.factors[0].second != 1) throw ValidationError(where + "polynomial is reducible over Q");
    if (t.kind == DivisorTerm::Kind::Point) {
      if (!t.b.is_zero() && t.b.degree() >= t.a.degree()) throw ValidationError(where + "deg b must be below deg a");
      if (!((t.b * t.b - C.f) % t.a).is_zero()) throw ValidationError(where + "a does not divide b^2 - f");
    }
    for (size_t j = 0; j < i; ++j) {
      const auto& u = D.terms[j];
      if (u.kind == t.kind && u.a == t.a && (t.kind == DivisorTerm::Kind::Fibre || u.b == t.b))
        throw ValidationError(where + "duplicates an earlier term");
    }
  }
}

namespace {

bool terms_meet(const DivisorTerm& s, const DivisorTerm& t) {
  if (gcd(s.a, t.a).degree() < 1) return false;
  if (s.kind == DivisorTerm::Kind::Fibre || t.kind == DivisorTerm::Kind::Fibre) return true;
  // Same irreducible x-polynomial: the points coincide iff the y-values agree.
  return gcd(s.a, s.b - t.b).degree() > 0;
}

}  // namespace

bool supports_meet(const FormalDivisor& D, const FormalDivisor& E) {
  if (D.infinity_coefficient != 0 && E.infinity_coefficient != 0) return true;
  for (const auto& s : D.terms)
    for (const auto& t : E.terms)
      if (terms_meet(s, t)) return true;
  return false;
}

FormalDivisor construct_E(const FormalDivisor& D, const Rational& lambda, const HyperellipticCurve& C) {
  if (D.degree() != 0) throw ValidationError("divisor must have degree zero");
  if (C.f(lambda) == 0) throw ValidationError("lambda = " + lambda.get_str() + " is a root of f");
  FormalDivisor E;
  for (const auto& t : D.terms) {
    if (t.kind != DivisorTerm::Kind::Point) throw ValidationError("fibre terms are not allowed in D");
    if (t.a(lambda) == 0) throw ValidationError("lambda = " + lambda.get_str() + " is an x-coordinate of supp(D)");
    if ((t.b % t.a).is_zero() || gcd(t.a, t.b).degree() > 0)
      throw ValidationError("supp(D) contains a Weierstrass point");
    DivisorTerm inv = t;
    inv.b = (-t.b) % t.a;
    E.terms.push_back(std::move(inv));
  }
  if (D.infinity_coefficient != 0) {
    DivisorTerm fib;
    fib.kind = DivisorTerm::Kind::Fibre;
    fib.a = Poly(std::vector<Rational>{-lambda, 1});
    fib.coefficient = D.infinity_coefficient / 2;
    E.terms.push_back(std::move(fib));
  }
  if (supports_meet(D, E)) throw ValidationError("supp(E) meets supp(D); D contains a point and its involution image");
  return E;
}

FormalDivisor construct_E(const MumfordDivisor& D, const Rational& lambda, const HyperellipticCurve& C) {
  validate_divisor(D, C);
  if (D.a(lambda) == 0) throw ValidationError("a(lambda) = 0 for lambda = " + lambda.get_str());
  if (has_weierstrass_support(D, C)) throw ValidationError("supp(D) contains a Weierstrass point");
  return construct_E(to_formal(D), lambda, C);
}

namespace {

std::vector<Rational> lambda_candidates(std::uint64_t seed) {
  std::vector<Rational> c;
  c.emplace_back(0);
  for (long k = 1; k <= 512; ++k) {
    c.emplace_back(k);
    c.emplace_back(-k);
  }
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(c.begin(), c.begin() + 33, rng);
  }
  return c;
}

}  // namespace

Rational choose_lambda(const FormalDivisor& D, const HyperellipticCurve& C, std::uint64_t seed) {
  for (const Rational& l : lambda_candidates(seed)) {
    if (C.f(l) == 0) continue;
    bool ok = std::all_of(D.terms.begin(), D.terms.end(), [&](const DivisorTerm& t) { return t.a(l) != 0; });
    if (ok) return l;
  }
  throw Error("internal: no admissible lambda among the candidates");
}

Rational choose_lambda(const MumfordDivisor& D, const HyperellipticCurve& C, std::uint64_t seed) {
  return choose_lambda(to_formal(D), C, seed);
}

}  // namespace hyperheight
