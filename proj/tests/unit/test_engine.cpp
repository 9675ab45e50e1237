#include "doctest.h"
#include "hyperheight/height_engine.hpp"

#include <random>

using namespace hyperheight;
namespace mp = boost::multiprecision;

namespace {

Precision prec30() { return Precision{30, 10}; }

Real tol(int e) { return mp::pow(Real(10), -e); }

HyperellipticCurve genus3() { return make_curve(Poly{25, -13, 11, -15, 0, 0, 0, 1}); }

HyperellipticCurve genus2() {
  return make_curve(Poly{1, -1, 0, 0, 0, 1});
}

// y^2 = x^(2g+1) + 6x^2 - 4x + 1; the model is not regular at 2 above x = 0.
HyperellipticCurve family_b(int g) {
  std::vector<Rational> c(2 * g + 2, 0);
  c[0] = 1;
  c[1] = -4;
  c[2] += 6;
  c[2 * g + 1] += 1;
  return make_curve(c);
}

HeightOptions options_for(const HyperellipticCurve& C, std::uint64_t seed = 0) {
  HeightOptions o;
  o.prec = prec30();
  o.seed = seed;
  o.periods = periods_for(C, o);
  return o;
}

Real assembled(const HeightBreakdown& b) {
  PrecisionScope s(b.precision_used);
  Real sum = b.archimedean_term;
  for (const auto& t : b.local_terms) sum += mp::log(Real(t.prime.get_str())) * to_real(t.horizontal + t.fibral);
  for (const auto& r : b.residual_terms) sum += to_real(r.weight) * mp::log(Real(r.cofactor.get_str()));
  return sum / (b.multiplier * b.multiplier);
}

}  // namespace

TEST_CASE("heights on the genus three example") {
  auto C = genus3();
  auto o = options_for(C);
  auto D = point_divisor(1, 3, C), E = point_divisor(0, -5, C);
  auto bD = neron_tate_height(C, D, o);
  auto bE = neron_tate_height(C, E, o);
  PrecisionScope s(o.prec);
  CHECK(mp::abs(bD.total_height - Real("1.77668")) < tol(5));
  CHECK(mp::abs(bE.total_height - Real("1.94307")) < tol(5));
  CHECK(bD.multiplier == 1);
  CHECK(bD.lambda == 0);
  CHECK_FALSE(bD.torsion);
  CHECK(bD.residual_terms.empty());
  CHECK(mp::abs(assembled(bD) - bD.total_height) < tol(28));
  auto places = candidate_places(C, to_formal(D), construct_E(D, bD.lambda, C));
  for (const auto& t : bD.local_terms) {
    bool listed = false;
    for (const auto& p : places) listed |= p.prime == t.prime;
    CHECK(listed);
  }
}

TEST_CASE("height input errors") {
  auto C = genus3();
  auto o = options_for(C);
  CHECK_THROWS_WITH_AS(neron_tate_height(C, MumfordDivisor::identity(), o), doctest::Contains("input"),
                       ValidationError);
  MumfordDivisor bad{Poly{-1, 1}, Poly{4}};
  CHECK_THROWS_AS(neron_tate_height(C, bad, o), ValidationError);
  CHECK_THROWS_AS(height_pairing(C, MumfordDivisor::identity(), point_divisor(1, 3, C), o), ValidationError);
  CHECK_THROWS_AS(regulator(C, {}, o), ValidationError);
  HeightOptions low = o;
  low.prec = Precision{10, 10};
  CHECK_THROWS_AS(neron_tate_height(C, point_divisor(1, 3, C), low), ValidationError);
}

TEST_CASE("pairing, parallelogram law and regulator on the genus three example") {
  auto C = genus3();
  auto o = options_for(C);
  auto D = point_divisor(1, 3, C), E = point_divisor(0, -5, C);
  Real hD = neron_tate_height(C, D, o).total_height;
  Real hE = neron_tate_height(C, E, o).total_height;
  Real pDE = height_pairing(C, D, E, o);
  Real p2DE = height_pairing(C, multiply(D, 2, C), E, o);
  Real pDD = height_pairing(C, D, D, o);
  Real res = parallelogram_residual(C, D, E, o);
  Real res_same = parallelogram_residual(C, D, D, o);
  Real h2D = neron_tate_height(C, multiply(D, 2, C), o).total_height;
  Real reg1 = regulator(C, {D}, o);
  Real reg_dep = regulator(C, {D, multiply(D, 2, C)}, o);
  Real reg2 = regulator(C, {D, E}, o);
  PrecisionScope s(o.prec);
  CHECK(mp::abs(pDD - hD) < tol(25));
  CHECK(mp::abs(p2DE - 2 * pDE) < tol(25));
  CHECK(res < tol(20));
  CHECK(mp::abs(res_same - mp::abs(4 * hD - h2D)) < tol(25));
  CHECK(mp::abs(reg1 - hD) < tol(25));
  CHECK(mp::abs(reg_dep) < tol(20));
  // Gram determinant from the four printed heights of D, E, D + E, D - E.
  Real g12 = (Real("4.35844") - Real("1.77668") - Real("1.94307")) / 2;
  Real expect = Real("1.77668") * Real("1.94307") - g12 * g12;
  CHECK(mp::abs(reg2 - expect) < tol(3));
  CHECK(mp::abs(reg2 - (hD * hE - pDE * pDE)) < tol(25));
}

TEST_CASE("choice independence: lambda and auxiliary points") {
  auto C = genus3();
  auto D = point_divisor(1, 3, C);
  auto b0 = neron_tate_height(C, D, options_for(C, 0));
  auto b1 = neron_tate_height(C, D, options_for(C, 3));
  PrecisionScope s(prec30());
  CHECK(b0.lambda != b1.lambda);
  CHECK(mp::abs(b0.total_height - b1.total_height) < tol(20));
}

TEST_CASE("torsion divisors have height zero") {
  Poly f = Poly{0, 1} * Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{5, 1};
  auto C = make_curve(f);
  auto T = cantor_add(make_divisor(Poly{0, 1}, Poly(), C), make_divisor(Poly{-1, 1}, Poly(), C), C);
  auto b = neron_tate_height(C, T, options_for(C));
  PrecisionScope s(prec30());
  CHECK(b.torsion);
  CHECK(b.multiplier == 2);
  CHECK(b.total_height == 0);
}

TEST_CASE("divisors touching a Weierstrass point use the doubled divisor") {
  Poly f = Poly{0, 1, 0, 0, -1, 1};
  auto C = make_curve(f);
  auto o = options_for(C);
  auto D = cantor_add(make_divisor(Poly{0, 1}, Poly(), C), point_divisor(1, 1, C), C);
  auto b = neron_tate_height(C, D, o);
  auto b3 = neron_tate_height(C, multiply(D, 3, C), o);
  PrecisionScope s(prec30());
  CHECK(b.multiplier % 2 == 0);
  CHECK(b.total_height > 0);
  CHECK(mp::abs(b3.total_height - 9 * b.total_height) < tol(20));
}

TEST_CASE("missing regular model falls back to a multiple") {
  auto C = family_b(1);
  auto o = options_for(C);
  auto D = cantor_add(point_divisor(1, 2, C), point_divisor(0, 1, C), C);
  auto b = neron_tate_height(C, D, o);
  {
    PrecisionScope s(prec30());
    CHECK(b.multiplier > 1);
    CHECK(mp::abs(b.total_height - Real("1.41617")) < tol(5));
  }
  HeightOptions strict = o;
  strict.max_fallback_multiple = 1;
  try {
    neron_tate_height(C, D, strict);
    FAIL("expected ReductionDataRequired");
  } catch (const ReductionDataRequired& e) {
    CHECK(e.prime() == "2");
    CHECK(std::string(e.what()).find("local_nonarch_pairing") != std::string::npos);
  }
}

TEST_CASE("quadraticity and positivity on a small corpus") {
  struct Case {
    HyperellipticCurve C;
    MumfordDivisor D;
  };
  auto g2 = genus2();
  auto g3 = genus3();
  auto e1 = make_curve(Poly{11, -10, 2, 1});
  std::vector<Case> cases = {
      {e1, point_divisor(1, 2, e1)},
      {g2, point_divisor(0, 1, g2)},
      {g2, cantor_add(point_divisor(1, 1, g2), point_divisor(-1, -1, g2), g2)},
      {g3, point_divisor(0, -5, g3)},
  };
  for (const auto& c : cases) {
    auto o = options_for(c.C);
    Real h = neron_tate_height(c.C, c.D, o).total_height;
    Real h2 = neron_tate_height(c.C, multiply(c.D, 2, c.C), o).total_height;
    Real h3 = neron_tate_height(c.C, multiply(c.D, 3, c.C), o).total_height;
    PrecisionScope s(prec30());
    CHECK(h > 0);
    CHECK(mp::abs(h2 - 4 * h) < tol(20));
    CHECK(mp::abs(h3 - 9 * h) < tol(20));
  }
}

TEST_CASE("heights agree at two precisions") {
  auto C = genus2();
  auto D = point_divisor(0, 1, C);
  HeightOptions lo, hi;
  lo.prec = Precision{20, 10};
  hi.prec = Precision{40, 10};
  Real a = neron_tate_height(C, D, lo).total_height;
  Real b = neron_tate_height(C, D, hi).total_height;
  PrecisionScope s(hi.prec);
  CHECK(mp::abs(a - b) < tol(19));
}
