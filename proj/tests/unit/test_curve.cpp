#include "doctest.h"
#include "hyperheight/curve.hpp"
#include "hyperheight/errors.hpp"

#include <random>

using namespace hyperheight;

namespace {

HyperellipticCurve genus3() { return make_curve(Poly{25, -13, 11, -15, 0, 0, 0, 1}); }
HyperellipticCurve genus1() { return make_curve(Poly{11, -10, 2, 1}); }

// Genus 2 curve with f(i) = (i + 1)^2 for i = 0..4.
HyperellipticCurve genus2_many_points() {
  Poly f = Poly{0, 1} * Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{-4, 1} + Poly{1, 2, 1};
  return make_curve(f);
}

Poly lin(long r) { return Poly{-r, 1}; }

std::vector<MumfordDivisor> random_corpus(const HyperellipticCurve& C, const std::vector<MumfordDivisor>& gens,
                                          int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<MumfordDivisor> out;
  while (static_cast<int>(out.size()) < count) {
    MumfordDivisor acc;
    for (const auto& g : gens) acc = cantor_add(acc, multiply(g, coef(rng), C), C);
    out.push_back(acc);
  }
  return out;
}

}  // namespace

TEST_CASE("make_curve examples and errors") {
  CHECK(genus3().genus == 3);
  CHECK(genus1().genus == 1);
  CHECK_THROWS_WITH_AS(make_curve(Poly{1, 0, 0, 0, 1}), doctest::Contains("odd degree"), ValidationError);
  CHECK_THROWS_AS(make_curve(Poly{1, 0, 0, 2}), ValidationError);
  CHECK_THROWS_AS(make_curve(Poly(std::vector<Rational>{Rational(1, 2), 0, 0, 1})), ValidationError);
  CHECK_THROWS_AS(make_curve(Poly{0, 0, 1, 1}), ValidationError);  // x^2 (x + 1)
  CHECK_THROWS_AS(make_curve(std::vector<Rational>{}), ValidationError);
}

TEST_CASE("discriminant of the genus one example") {
  // x^3 + b x^2 + c x + d: b^2 c^2 - 4 c^3 - 4 b^3 d - 27 d^2 + 18 b c d.
  long b = 2, c = -10, d = 11;
  Integer expect = b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
  CHECK(genus1().discriminant == expect);
}

TEST_CASE("cantor_add identity, inverse and doubling") {
  auto C = genus1();
  auto P = point_divisor(1, 2, C);
  CHECK(cantor_add(P, MumfordDivisor::identity(), C) == P);
  CHECK(cantor_add(P, involution(P), C).is_identity());
  // Tangent at (1, 2): slope f'(1) / (2 y) = -3/4, x3 = m^2 - 2 - 2, y3 = -(2 + m (x3 - 1)).
  Rational m(-3, 4);
  Rational x3 = m * m - 2 - 2;
  Rational y3 = -(2 + m * (x3 - 1));
  auto twoP = cantor_add(P, P, C);
  CHECK(twoP == point_divisor(x3, y3, C));
  CHECK(twoP == multiply(P, 2, C));
}

TEST_CASE("involution examples") {
  auto C = genus3();
  auto D = make_divisor(lin(1), Poly{3}, C);
  CHECK(involution(D) == make_divisor(lin(1), Poly{-3}, C));
  CHECK(involution(MumfordDivisor::identity()).is_identity());
  auto corpus = random_corpus(C, {D, point_divisor(0, -5, C)}, 20, 3);
  for (const auto& X : corpus) CHECK(involution(involution(X)) == X);
}

TEST_CASE("divisor validation") {
  auto C = genus3();
  CHECK_THROWS_AS(make_divisor(lin(1), Poly{4}, C), ValidationError);
  CHECK_THROWS_AS(make_divisor(Poly{-1, 2}, Poly{3}, C), ValidationError);
  CHECK_THROWS_AS(point_divisor(2, 2, C), ValidationError);
  auto g1 = genus1();
  CHECK_THROWS_AS(make_divisor(lin(1) * lin(2), Poly{2}, g1), ValidationError);  // degree above genus
}

TEST_CASE("weierstrass support") {
  auto C = genus3();
  CHECK_FALSE(has_weierstrass_support(make_divisor(lin(1), Poly{3}, C), C));
  CHECK_FALSE(has_weierstrass_support(MumfordDivisor::identity(), C));
  auto E = make_curve(Poly{0, -1, 0, 1});  // y^2 = x^3 - x
  CHECK(has_weierstrass_support(make_divisor(lin(1), Poly(), E), E));
}

TEST_CASE("ensure_weierstrass_free") {
  auto C = genus3();
  auto D = make_divisor(lin(1), Poly{3}, C);
  auto r = ensure_weierstrass_free(D, C);
  CHECK(r.multiplier == 1);
  CHECK(r.divisor == D);
  CHECK_THROWS_AS(ensure_weierstrass_free(MumfordDivisor::identity(), C), ValidationError);

  // Sum of two rational Weierstrass points: every multiple is 0 or itself.
  Poly f = Poly{0, 1} * Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{5, 1};
  auto W = make_curve(f);
  auto D2 = cantor_add(make_divisor(lin(0), Poly(), W), make_divisor(lin(1), Poly(), W), W);
  CHECK(has_weierstrass_support(D2, W));
  CHECK(torsion_order(D2, W) == 2);
  CHECK_THROWS_AS(ensure_weierstrass_free(D2, W), ValidationError);
}

TEST_CASE("ensure_weierstrass_free doubles a divisor touching a 2-torsion point") {
  // f = x ((x - 1)(x - 2)(x - 3)(x - 4) + 4) vanishes at 0 and (1, 2) lies on it.
  Poly f = Poly{0, 1} * (Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{-4, 1} + Poly{4});
  auto C = make_curve(f);
  auto D = cantor_add(make_divisor(lin(0), Poly(), C), point_divisor(1, 2, C), C);
  CHECK(has_weierstrass_support(D, C));
  auto r = ensure_weierstrass_free(D, C);
  CHECK(r.multiplier == 2);
  auto twoD = cantor_add(D, D, C);
  CHECK(r.divisor == twoD);
  CHECK_FALSE(has_weierstrass_support(twoD, C));
}

TEST_CASE("construct_E and choose_lambda") {
  auto C = genus3();
  auto D = make_divisor(lin(1), Poly{3}, C);
  CHECK(choose_lambda(D, C) == 0);
  auto E = construct_E(D, 0, C);
  REQUIRE(E.terms.size() == 2);
  CHECK(E.terms[0].a == lin(1));
  CHECK(E.terms[0].b == Poly{-3});
  CHECK(E.terms[0].coefficient == 1);
  CHECK(E.terms[1].kind == DivisorTerm::Kind::Fibre);
  CHECK(E.terms[1].a == lin(0));
  CHECK(E.terms[1].coefficient == Rational(-1, 2));
  CHECK(E.degree() == 0);

  auto D2 = make_divisor(lin(0), Poly{-5}, C);
  CHECK(choose_lambda(D2, C) == 1);
  CHECK_THROWS_WITH_AS(construct_E(D2, 0, C), doctest::Contains("a(lambda) = 0"), ValidationError);
  CHECK(choose_lambda(MumfordDivisor::identity(), C) == 0);

  auto sum = cantor_add(D, D2, C);  // degree 2: integer coefficients in E
  auto E2 = construct_E(sum, choose_lambda(sum, C), C);
  for (const auto& t : E2.terms) CHECK(t.coefficient.get_den() == 1);
}

TEST_CASE("choose_lambda with a seed permutes the search but keeps preconditions") {
  auto C = genus3();
  auto D = make_divisor(lin(1), Poly{3}, C);
  for (std::uint64_t s = 1; s < 10; ++s) {
    Rational l = choose_lambda(D, C, s);
    CHECK(l != 1);
    CHECK(C.f(l) != 0);
  }
}

TEST_CASE("construct_E rejects divisors containing a point and its image") {
  auto C = genus3();
  FormalDivisor D;
  D.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{3}, 1});
  D.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{-3}, -1});
  CHECK_THROWS_AS(construct_E(D, 0, C), ValidationError);
  FormalDivisor bad;
  bad.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{3}, 1});
  CHECK_THROWS_AS(construct_E(bad, 0, C), ValidationError);  // degree 1
}

TEST_CASE("to_formal splits into irreducible blocks") {
  auto C = genus2_many_points();
  auto D = cantor_add(point_divisor(0, 1, C), point_divisor(2, -3, C), C);
  auto F = to_formal(D);
  CHECK(F.terms.size() == 2);
  CHECK(F.infinity_coefficient == -2);
  CHECK(F.degree() == 0);
  validate_formal(F, C);
}

TEST_CASE("Cantor arithmetic is associative and commutative") {
  struct Setup {
    HyperellipticCurve C;
    std::vector<MumfordDivisor> gens;
  };
  auto g2 = genus2_many_points();
  auto g3 = genus3();
  auto g1 = genus1();
  std::vector<Setup> setups = {
      {g1, {point_divisor(1, 2, g1)}},
      {g2, {point_divisor(0, 1, g2), point_divisor(1, 2, g2), point_divisor(3, -4, g2)}},
      {g3, {point_divisor(1, 3, g3), point_divisor(0, -5, g3)}},
  };
  for (const auto& s : setups) {
    auto corpus = random_corpus(s.C, s.gens, 30, 17);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<size_t> pick(0, corpus.size() - 1);
    for (int t = 0; t < 100; ++t) {
      const auto &A = corpus[pick(rng)], &B = corpus[pick(rng)], &D = corpus[pick(rng)];
      auto AB = cantor_add(A, B, s.C);
      CHECK(AB == cantor_add(B, A, s.C));
      auto left = cantor_add(AB, D, s.C);
      auto right = cantor_add(A, cantor_add(B, D, s.C), s.C);
      CHECK(left == right);
      CHECK(((left.b * left.b - s.C.f) % left.a).is_zero());
      CHECK(left.a.degree() <= s.C.genus);
      CHECK(cantor_add(A, involution(A), s.C).is_identity());
    }
  }
}

TEST_CASE("construct_E output has degree zero and disjoint support") {
  auto C = genus2_many_points();
  auto corpus = random_corpus(C, {point_divisor(0, 1, C), point_divisor(1, 2, C), point_divisor(3, -4, C)}, 25, 23);
  for (const auto& D : corpus) {
    if (D.is_identity() || has_weierstrass_support(D, C)) continue;
    Rational l = choose_lambda(D, C);
    auto E = construct_E(D, l, C);
    CHECK(E.degree() == 0);
    CHECK(E.infinity_coefficient == 0);
    CHECK_FALSE(supports_meet(to_formal(D), E));
    for (const auto& s : to_formal(D).terms)
      for (const auto& t : E.terms) {
        if (t.kind == DivisorTerm::Kind::Point && s.a == t.a)
          CHECK(resultant(s.a, s.b - t.b) != 0);
        else
          CHECK(resultant(s.a, t.a) != 0);
      }
  }
}
