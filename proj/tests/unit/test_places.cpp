#include "doctest.h"
#include "hyperheight/errors.hpp"
#include "hyperheight/local.hpp"
#include "hyperheight/places.hpp"

#include <algorithm>
#include <map>
#include <random>

using namespace hyperheight;

namespace {

HyperellipticCurve genus3() { return make_curve(Poly{25, -13, 11, -15, 0, 0, 0, 1}); }

HyperellipticCurve genus2_many_points() {
  Poly f = Poly{0, 1} * Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{-4, 1} + Poly{1, 2, 1};
  return make_curve(f);
}

Poly lin(long r) { return Poly{-r, 1}; }

std::vector<Integer> primes_with(const std::vector<PlaceReport>& r, PlaceReason why) {
  std::vector<Integer> out;
  for (const auto& rep : r)
    if (std::find(rep.reasons.begin(), rep.reasons.end(), why) != rep.reasons.end()) out.push_back(rep.prime);
  return out;
}

std::vector<Integer> all_primes(const std::vector<PlaceReport>& r) {
  std::vector<Integer> out;
  for (const auto& rep : r) out.push_back(rep.prime);
  return out;
}

std::vector<Integer> small_primes(long limit) {
  std::vector<Integer> out;
  for (long n = 2; n < limit; ++n)
    if (is_probable_prime(Integer(n))) out.emplace_back(n);
  return out;
}

}  // namespace

TEST_CASE("reason names") {
  CHECK(reason_name(PlaceReason::BadReduction) == "BAD_REDUCTION");
  CHECK(reason_name(PlaceReason::SupportCollision) == "SUPPORT_COLLISION");
  CHECK(reason_name(PlaceReason::Denominator) == "DENOMINATOR");
}

TEST_CASE("genus three example") {
  auto C = genus3();
  auto D = make_divisor(lin(1), Poly{3}, C);
  auto E = construct_E(D, 0, C);
  auto r = candidate_places(C, D, E);
  CHECK(primes_with(r, PlaceReason::SupportCollision) == std::vector<Integer>{2, 3});
  CHECK(primes_with(r, PlaceReason::BadReduction) == std::vector<Integer>{2, 255659, 84629003});
  CHECK(primes_with(r, PlaceReason::Denominator).empty());
  for (const auto& rep : r) CHECK_FALSE(rep.reasons.empty());
}

TEST_CASE("unit resultant contributes nothing") {
  auto C = genus3();
  FormalDivisor D, E;
  D.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{3}, 1});
  D.infinity_coefficient = -1;
  E.terms.push_back({DivisorTerm::Kind::Fibre, lin(2), Poly(), Rational(1, 2)});
  CHECK(primes_with(candidate_places(C, D, E), PlaceReason::SupportCollision).empty());
}

TEST_CASE("empty E gives no collision primes") {
  auto C = genus3();
  auto r = candidate_places(C, make_divisor(lin(1), Poly{3}, C), FormalDivisor{});
  CHECK(primes_with(r, PlaceReason::SupportCollision).empty());
  CHECK_FALSE(r.empty());  // 2 is always present
}

TEST_CASE("denominators are reported") {
  auto C = genus3();
  FormalDivisor D, E;
  D.terms.push_back({DivisorTerm::Kind::Point, Poly(std::vector<Rational>{Rational(-1, 5), 1}), Poly{0}, 1});
  D.infinity_coefficient = -1;
  E.terms.push_back({DivisorTerm::Kind::Fibre, lin(2), Poly(), Rational(1, 2)});
  CHECK(primes_with(candidate_places(C, D, E), PlaceReason::Denominator) == std::vector<Integer>{5});
}

TEST_CASE("meeting supports are rejected") {
  auto C = genus3();
  FormalDivisor D, E;
  D.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{3}, 1});
  E.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{3}, -1});
  CHECK_THROWS_AS(candidate_places(C, D, E), ValidationError);
}

TEST_CASE("soundness: primes outside the set give zero horizontal pairs") {
  auto C = genus2_many_points();
  std::vector<MumfordDivisor> pts = {point_divisor(0, 1, C), point_divisor(1, 2, C), point_divisor(3, -4, C),
                                     point_divisor(4, 5, C)};
  auto primes = small_primes(10000);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<size_t> pick(0, primes.size() - 1);
  int divisors = 0;
  while (divisors < 6) {
    MumfordDivisor D;
    for (const auto& P : pts) D = cantor_add(D, multiply(P, coef(rng), C), C);
    if (D.is_identity() || has_weierstrass_support(D, C)) continue;
    ++divisors;
    auto Df = to_formal(D);
    auto E = construct_E(Df, choose_lambda(Df, C), C);
    auto in_set = all_primes(candidate_places(C, Df, E));
    int checked = 0;
    while (checked < 20) {
      Integer q = primes[pick(rng)];
      if (std::find(in_set.begin(), in_set.end(), q) != in_set.end()) continue;
      ++checked;
      CHECK(C.discriminant % q != 0);
      auto LD = split_padic(Df, C, q, 12, "D");
      auto LE = split_padic(E, C, q, 12, "E");
      for (const auto& X : LD)
        for (const auto& Y : LE) CHECK(horizontal_pair(X, Y) == 0);
    }
  }
}

TEST_CASE("monotonicity in the support of D") {
  auto C = genus2_many_points();
  FormalDivisor E;
  E.terms.push_back({DivisorTerm::Kind::Point, lin(1), Poly{-2}, 1});
  E.terms.push_back({DivisorTerm::Kind::Fibre, lin(7), Poly(), Rational(-1, 2)});
  FormalDivisor small, large;
  small.terms.push_back({DivisorTerm::Kind::Point, lin(0), Poly{1}, 1});
  small.infinity_coefficient = -1;
  large = small;
  large.terms.push_back({DivisorTerm::Kind::Point, lin(3), Poly{-4}, 1});
  large.terms.push_back({DivisorTerm::Kind::Point, lin(4), Poly{5}, 1});
  large.infinity_coefficient = -3;
  auto a = all_primes(candidate_places(C, small, E));
  auto b = all_primes(candidate_places(C, large, E));
  for (const auto& p : a) CHECK(std::find(b.begin(), b.end(), p) != b.end());
  CHECK(b.size() > a.size());
}

TEST_CASE("every reported prime divides an auditable invariant") {
  auto C = genus2_many_points();
  auto D = cantor_add(point_divisor(0, 1, C), point_divisor(3, -4, C), C);
  auto Df = to_formal(D);
  auto E = construct_E(Df, choose_lambda(Df, C), C);
  Integer product = 2 * C.discriminant;
  for (const auto& X : Df.terms)
    for (const auto& Y : E.terms) {
      Rational r = resultant(X.a, Y.a);
      if (r != 0) product *= r.get_num();
      if (X.a == Y.a) {
        product *= resultant(X.a, Y.b - X.b).get_num();
        product *= discriminant(X.a).get_num();
      }
    }
  for (const auto& p : all_primes(candidate_places(C, Df, E))) CHECK(product % p == 0);
}

TEST_CASE("intersection index of simple terms") {
  auto C = genus3();
  auto P = to_formal(make_divisor(lin(1), Poly{3}, C)).terms.at(0);
  auto Q = to_formal(make_divisor(lin(1), Poly{-3}, C)).terms.at(0);
  CHECK(intersection_index(P, Q) == 6);
  DivisorTerm fibre{DivisorTerm::Kind::Fibre, lin(4), Poly(), 1};
  CHECK(intersection_index(P, fibre) == 3);
  CHECK(intersection_index(fibre, P) == 3);
  DivisorTerm fibre2{DivisorTerm::Kind::Fibre, lin(-1), Poly(), 1};
  CHECK(intersection_index(fibre, fibre2) == 25);
}

TEST_CASE("residual cofactors carry exactly the unfactored good-prime pairings") {
  auto C = genus3();
  // First multiple of (1, 3) whose indices have a cofactor that one rho step cannot split.
  FormalDivisor F, E;
  PlacePlan lazy;
  for (int n = 2; n <= 8 && lazy.residuals.empty(); ++n) {
    auto D = multiply(make_divisor(lin(1), Poly{3}, C), n, C);
    F = to_formal(D);
    E = construct_E(D, 0, C);
    lazy = plan_places(C, F, E, std::chrono::seconds(60), 1);
  }
  auto full = plan_places(C, F, E);
  CHECK(full.residuals.empty());
  REQUIRE_FALSE(lazy.residuals.empty());
  // Every prime of a cofactor is a full-plan place missing from the lazy plan.
  std::map<Integer, Rational> expect;
  for (const auto& r : lazy.residuals) {
    CHECK(r.cofactor > 1);
    for (const auto& [p, e] : factor_integer(r.cofactor).factors)
      expect[p] += F.terms[r.d_term].coefficient * E.terms[r.e_term].coefficient * e;
  }
  auto lazy_primes = all_primes(lazy.places);
  for (const auto& [p, w] : expect) {
    CHECK(std::find(lazy_primes.begin(), lazy_primes.end(), p) == lazy_primes.end());
    auto full_primes = all_primes(full.places);
    CHECK(std::find(full_primes.begin(), full_primes.end(), p) != full_primes.end());
    CHECK(local_nonarch_pairing(F, E, C, p).total == w);
  }
}
