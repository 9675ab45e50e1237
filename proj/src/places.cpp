#include "hyperheight/places.hpp"

#include "hyperheight/errors.hpp"
#include "qlinalg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hyperheight {

std::string reason_name(PlaceReason r) {
  switch (r) {
    case PlaceReason::BadReduction: return "BAD_REDUCTION";
    case PlaceReason::SupportCollision: return "SUPPORT_COLLISION";
    case PlaceReason::Denominator: return "DENOMINATOR";
  }
  return "UNKNOWN";
}

namespace {

using Clock = std::chrono::steady_clock;

Integer int_gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer numerator_abs(const Rational& q) { return abs(q.get_num()); }

Poly primitive(const Poly& a) { return Poly::from_integers(a.primitive_integer()); }

// Product over root pairs (alpha of a_X, beta of a_Y) of b_X(alpha) - b_Y(beta).
Rational cross_difference(const DivisorTerm& X, const DivisorTerm& Y) {
  Poly chi = detail::charpoly(detail::multiplication_matrix(Y.b, Y.a));
  return resultant(X.a, chi.compose(X.b) % X.a);
}

// Integer whose prime divisors contain every prime where the closures of the
// point blocks X and Y can meet (denominator primes handled separately).
Integer collision_invariant(const DivisorTerm& X, const DivisorTerm& Y) {
  bool fibre = X.kind == DivisorTerm::Kind::Fibre || Y.kind == DivisorTerm::Kind::Fibre;
  if (fibre) return numerator_abs(resultant(primitive(X.a), primitive(Y.a)));
  if (X.a == Y.a) {
    // Same conjugate set: the same root collides when the y-values agree,
    // distinct roots only above primes dividing the discriminant.
    Integer same = numerator_abs(resultant(X.a, Y.b - X.b));
    Integer disc = numerator_abs(discriminant(primitive(X.a)));
    Rational cross = cross_difference(X, Y);
    Integer other = cross == 0 ? disc : int_gcd(disc, numerator_abs(cross));
    return same * other;
  }
  Integer res = numerator_abs(resultant(primitive(X.a), primitive(Y.a)));
  Rational cross = cross_difference(X, Y);
  return cross == 0 ? res : int_gcd(res, numerator_abs(cross));
}

// Index in Z^n of the lattice spanned by the columns of A (n rows), 0 when
// the columns do not span a full-rank lattice.
Integer lattice_index(std::vector<std::vector<Integer>> A) {
  size_t n = A.size(), m = n ? A[0].size() : 0;
  Integer det = 1;
  auto swap_cols = [&](size_t a, size_t b) {
    for (auto& row : A) std::swap(row[a], row[b]);
  };
  for (size_t r = 0; r < n; ++r) {
    for (;;) {
      size_t best = m;
      for (size_t c = r; c < m; ++c)
        if (A[r][c] != 0 && (best == m || abs(A[r][c]) < abs(A[r][best]))) best = c;
      if (best == m) return 0;
      swap_cols(r, best);
      bool done = true;
      for (size_t c = r + 1; c < m; ++c) {
        if (A[r][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A[r][c].get_mpz_t(), A[r][r].get_mpz_t());
        for (size_t i = r; i < n; ++i) A[i][c] -= q * A[i][r];
        if (A[r][c] != 0) done = false;
      }
      if (done) break;
    }
    det *= abs(A[r][r]);
  }
  return det;
}

// Index of the ideal generated by gens in Z[x]/(a), away from the primes of
// the denominators involved.
Integer ideal_index(const Poly& a, const std::vector<Poly>& gens) {
  size_t n = static_cast<size_t>(a.degree());
  std::vector<std::vector<Integer>> A(n);
  for (const auto& g : gens) {
    auto M = detail::multiplication_matrix(g % a, a);
    for (size_t c = 0; c < n; ++c) {
      Integer den = 1;
      for (size_t r = 0; r < n; ++r) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), M[r][c].get_den().get_mpz_t());
      for (size_t r = 0; r < n; ++r) A[r].push_back(Rational(M[r][c] * den).get_num());
    }
  }
  return lattice_index(std::move(A));
}

void add_denominators(const Poly& p, std::set<Integer>& dens) {
  for (const auto& c : p.coeffs())
    if (c.get_den() != 1) dens.insert(c.get_den());
}

}  // namespace

std::vector<PlaceReport> candidate_places(const HyperellipticCurve& C, const FormalDivisor& D, const FormalDivisor& E,
                                          std::chrono::milliseconds budget) {
  auto deadline = Clock::now() + budget;
  auto remaining = [&] {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    return std::max(left, std::chrono::milliseconds(1));
  };
  std::map<Integer, std::set<PlaceReason>> found;
  auto add_primes = [&](const Integer& n, PlaceReason r) {
    if (abs(n) <= 1) return;
    for (const auto& p : prime_divisors(n, remaining())) found[p].insert(r);
  };

  found[Integer(2)].insert(PlaceReason::BadReduction);
  add_primes(C.discriminant, PlaceReason::BadReduction);

  std::set<Integer> dens;
  for (const auto* div : {&D, &E}) {
    for (const auto& t : div->terms) {
      add_denominators(t.a, dens);
      add_denominators(t.b, dens);
    }
  }
  dens.erase(Integer(1));
  for (const auto& d : dens) add_primes(d, PlaceReason::Denominator);

  for (const auto& X : D.terms)
    for (const auto& Y : E.terms) {
      Integer n = collision_invariant(X, Y);
      if (n == 0) throw ValidationError("supp(D) and supp(E) meet over the algebraic closure");
      if (n > 1) add_primes(n, PlaceReason::SupportCollision);
    }

  std::vector<PlaceReport> out;
  for (auto& [p, reasons] : found) out.push_back({p, std::vector<PlaceReason>(reasons.begin(), reasons.end())});
  return out;
}

Integer intersection_index(const DivisorTerm& X, const DivisorTerm& Y) {
  using Kind = DivisorTerm::Kind;
  Integer n;
  if (X.kind == Kind::Fibre && Y.kind == Kind::Fibre) {
    Integer one = ideal_index(X.a, {Y.a});
    n = one * one;
  } else if (Y.kind == Kind::Fibre) {
    n = ideal_index(X.a, {Y.a});
  } else if (X.kind == Kind::Fibre) {
    n = ideal_index(Y.a, {X.a});
  } else {
    n = ideal_index(X.a, {Y.a, X.b - Y.b});
  }
  if (n == 0) throw ValidationError("supp(D) and supp(E) meet over the algebraic closure");
  return n;
}

PlacePlan plan_places(const HyperellipticCurve& C, const FormalDivisor& D, const FormalDivisor& E,
                      std::chrono::milliseconds budget, unsigned long rho_steps) {
  auto deadline = Clock::now() + budget;
  auto remaining = [&] {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    return std::max(left, std::chrono::milliseconds(1));
  };
  std::map<Integer, std::set<PlaceReason>> found;
  found[Integer(2)].insert(PlaceReason::BadReduction);
  if (abs(C.discriminant) > 1)
    for (const auto& p : prime_divisors(C.discriminant, remaining())) found[p].insert(PlaceReason::BadReduction);
  std::set<Integer> dens;
  for (const auto* div : {&D, &E})
    for (const auto& t : div->terms) {
      add_denominators(t.a, dens);
      add_denominators(t.b, dens);
    }
  dens.erase(Integer(1));
  for (const auto& d : dens)
    for (const auto& p : prime_divisors(d, remaining())) found[p].insert(PlaceReason::Denominator);

  auto strip = [](Integer n, const Integer& p) {
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    return n;
  };
  std::vector<ResidualIndex> residuals;
  for (size_t i = 0; i < D.terms.size(); ++i)
    for (size_t j = 0; j < E.terms.size(); ++j) {
      Integer n = intersection_index(D.terms[i], E.terms[j]);
      for (const auto& [p, r] : found) n = strip(n, p);
      if (n == 1) continue;
      auto pf = factor_partial(n, rho_steps);
      for (const auto& [p, e] : pf.factors) found[p].insert(PlaceReason::SupportCollision);
      if (pf.cofactor > 1) residuals.push_back({i, j, pf.cofactor});
    }
  PlacePlan plan;
  for (auto& r : residuals) {
    for (const auto& [p, reasons] : found) r.cofactor = strip(r.cofactor, p);
    if (r.cofactor > 1) plan.residuals.push_back(r);
  }
  for (auto& [p, reasons] : found) plan.places.push_back({p, std::vector<PlaceReason>(reasons.begin(), reasons.end())});
  return plan;
}

std::vector<PlaceReport> candidate_places(const HyperellipticCurve& C, const MumfordDivisor& D, const FormalDivisor& E,
                                          std::chrono::milliseconds budget) {
  return candidate_places(C, to_formal(D), E, budget);
}

}  // namespace hyperheight
