#include "doctest.h"
#include "hyperheight/curve.hpp"
#include "hyperheight/riemann_theta.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <random>

using namespace hyperheight;
namespace mp = boost::multiprecision;

namespace {

Precision prec30() { return Precision{30, 10}; }

Real tol(int e) { return mp::pow(Real(10), -e); }

HyperellipticCurve genus3() { return make_curve(Poly{25, -13, 11, -15, 0, 0, 0, 1}); }
HyperellipticCurve genus2() {
  return make_curve(Poly{0, 1} * Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{-4, 1} + Poly{1, 2, 1});
}

CMatrix random_riemann_matrix(int g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  RMatrix A(g, RVector(g, Real(0)));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) A[i][j] = u(rng);
  CMatrix O(g, CVector(g));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      Real y = (i == j) ? Real(1) : Real(0);
      for (int k = 0; k < g; ++k) y += A[i][k] * A[j][k] / 2;
      O[i][j] = Complex(Real(u(rng)), y);
      if (j < i) O[i][j] = Complex(O[j][i].re, y);
    }
  return O;
}

CVector random_vector(int g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  CVector z(g);
  for (auto& v : z) v = Complex(Real(u(rng)), Real(u(rng)));
  return z;
}

CurvePoint rational_point(long x, long y) { return {false, Complex(Real(x)), Complex(Real(y))}; }

}  // namespace

TEST_CASE("theta at the origin for Omega = i") {
  PrecisionScope s(prec30());
  CMatrix O = {{Complex(Real(0), Real(1))}};
  Real expect = mp::pow(pi(), Real("0.25")) / boost::math::tgamma(Real("0.75"));
  Complex t = theta({Complex()}, O, prec30());
  CHECK(abs(t - Complex(expect)) < tol(30));
}

TEST_CASE("theta rejects bad input") {
  PrecisionScope s(prec30());
  CMatrix bad = {{Complex(Real(0), Real(-1))}};
  CHECK_THROWS_AS(make_theta_context(bad, prec30()), NumericalDegeneracy);
  CMatrix O = {{Complex(Real(0), Real(1))}};
  auto ctx = make_theta_context(O, prec30());
  CHECK_THROWS_AS(theta_scaled(CVector(2), ctx), ValidationError);
  CHECK_THROWS_AS(make_theta_context(O, Precision{5, 10}), ValidationError);
}

TEST_CASE("theta is even and quasi-periodic") {
  PrecisionScope s(prec30());
  std::mt19937_64 rng(11);
  for (int g = 1; g <= 3; ++g) {
    auto O = random_riemann_matrix(g, rng);
    auto ctx = make_theta_context(O, prec30());
    for (int trial = 0; trial < 3; ++trial) {
      auto z = random_vector(g, rng);
      Complex t = theta(z, ctx);
      CVector mz = z;
      for (auto& v : mz) v = -v;
      CHECK(abs(theta(mz, ctx) - t) < tol(26) * abs(t));
      for (int k = 0; k < g; ++k) {
        CVector z1 = z;
        z1[k] += Complex(1);
        CHECK(abs(theta(z1, ctx) - t) < tol(26) * abs(t));
        // theta(z + Omega e_k) = exp(-pi i Omega_kk - 2 pi i z_k) theta(z)
        CVector z2 = z;
        for (int j = 0; j < g; ++j) z2[j] += O[j][k];
        Complex factor = exp(Complex(Real(0), -pi()) * (O[k][k] + Complex(2) * z[k]));
        Complex lhs = theta(z2, ctx), rhs = factor * t;
        CHECK(abs(lhs - rhs) < tol(26) * abs(rhs));
      }
    }
  }
}

TEST_CASE("period matrix of y^2 = x^3 - x is i") {
  auto C = make_curve(Poly{0, -1, 0, 1});
  auto d = homology_and_periods(C, prec30());
  PrecisionScope s(prec30());
  CHECK(abs(d.period_matrix[0][0] - Complex(Real(0), Real(1))) < tol(28));
  // A-period of dx/y equals 2 * integral over [-1, 0] = 2 * Gamma(1/4)^2 / (2^(3/2) sqrt(pi)).
  Real g14 = boost::math::tgamma(Real("0.25"));
  Real quarter = g14 * g14 / (mp::pow(Real(2), Real("1.5")) * mp::sqrt(pi()));
  CHECK(abs(abs(d.a_periods[0][0]) - 2 * quarter) < tol(28));
}

TEST_CASE("period matrix is a Riemann matrix and A-normalized") {
  for (const auto& C : {genus2(), genus3()}) {
    auto d = homology_and_periods(C, prec30());
    PrecisionScope s(prec30());
    int g = C.genus;
    CHECK(d.symmetry_defect < tol(25));
    CHECK(d.min_eigen_bound > 0);
    CHECK(d.branch_points.size() == static_cast<size_t>(2 * g + 1));
    CHECK(d.homology_paths.size() == static_cast<size_t>(2 * g));
    auto I = multiply(d.normalization_matrix, d.a_periods);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) CHECK(abs(I[i][j] - Complex(i == j ? 1 : 0)) < tol(28));
  }
}

TEST_CASE("period matrix agrees at two precisions") {
  auto C = genus2();
  auto lo = homology_and_periods(C, Precision{20, 10});
  auto hi = homology_and_periods(C, Precision{40, 10});
  PrecisionScope s(Precision{40, 10});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(abs(lo.period_matrix[i][j] - hi.period_matrix[i][j]) < tol(19));
}

TEST_CASE("ill-conditioned curves are rejected") {
  // Mignotte polynomial x^5 - 2 (a x - 1)^2 has two roots about a^-3.5 apart.
  Integer a("100000");
  Poly lin(std::vector<Rational>{Rational(-1), Rational(a)});
  auto C = make_curve(Poly{0, 0, 0, 0, 0, 1} - Poly{2} * lin * lin);
  CHECK_THROWS_WITH_AS(homology_and_periods(C, prec30()), doctest::Contains("ill-conditioned"), NumericalDegeneracy);
}

TEST_CASE("Abel-Jacobi map") {
  auto C = genus3();
  auto d = homology_and_periods(C, prec30());
  PrecisionScope s(prec30());
  auto zero = abel_jacobi(CurvePoint::infinity(), d);
  for (const auto& v : zero) CHECK(abs(v) == 0);
  auto a = abel_jacobi(rational_point(1, 3), d);
  auto b = abel_jacobi(rational_point(1, -3), d);
  for (int i = 0; i < 3; ++i) CHECK(abs(a[i] + b[i]) < tol(28));
  CHECK_THROWS_AS(abel_jacobi(rational_point(1, 4), d), ValidationError);
}

TEST_CASE("complex square root keeps full precision near the real axis") {
  PrecisionScope s(prec30());
  for (const char* e : {"1e-18", "1e-25", "-1e-18"}) {
    Real eps(e);
    Complex z(Real(1), eps), w(Real(-1), eps);
    Complex r = sqrt(z), q = sqrt(w);
    CHECK(abs(r * r - z) < tol(38));
    CHECK(abs(q * q - w) < tol(38));
    CHECK(abs(r.im - (eps / 2 - eps * eps * eps / 16)) < tol(38) * mp::abs(eps));
  }
  Complex neg = sqrt(Complex(Real(-4)));
  CHECK(neg.re == 0);
  CHECK(neg.im == 2);
}

TEST_CASE("Abel-Jacobi map near a real branch point") {
  auto C = make_curve(Poly{1, -4, 3, 2, 3, -2, 4, 1});
  auto d = homology_and_periods(C, prec30());
  PrecisionScope s(prec30());
  Real e = d.branch_points.front().re;
  for (const auto& b : d.branch_points) e = std::min(e, Real(b.re));
  Complex x(e + Real("8.6e-6"));
  CurvePoint p{false, x, sqrt(horner(C.f, x))};
  CHECK_NOTHROW(abel_jacobi(p, d));
}

TEST_CASE("Abel-Jacobi image of a branch point is a half period") {
  auto C = make_curve(Poly{0, -1, 0, 1});
  auto d = homology_and_periods(C, prec30());
  PrecisionScope s(prec30());
  // (2, sqrt 6) and its doubling: 2 alpha(P) is a lattice vector plus alpha(2P).
  Complex x(Real(2));
  CurvePoint P{false, x, sqrt(horner(C.f, x))};
  auto a = abel_jacobi(P, d);
  // Doubling on y^2 = x^3 - x: m = (3x^2 - 1)/(2y), x2 = m^2 - 2x, y2 = -(y + m(x2 - x)).
  Complex m = (Complex(3) * x * x - Complex(1)) / (Complex(2) * P.y);
  Complex x2 = m * m - Complex(2) * x;
  Complex y2 = -(P.y + m * (x2 - x));
  auto a2 = abel_jacobi({false, x2, y2}, d);
  // 2P + (-2P) = 0 gives 2 a(P) = a(2P) mod lattice; lattice coordinates are
  // Re and Im / Im(Omega) of the difference for Omega = i.
  Complex diff = Complex(2) * a[0] - a2[0];
  Real u = diff.im / d.period_matrix[0][0].im;
  Real v = diff.re - u * d.period_matrix[0][0].re;
  CHECK(abs(Complex(u - mp::round(u), v - mp::round(v))) < tol(26));
}

TEST_CASE("Riemann constant makes theta vanish on the theta divisor") {
  auto C = genus2();
  auto d = homology_and_periods(C, prec30());
  PrecisionScope s(prec30());
  // theta(Delta - alpha(P)) = 0 for any single point P in genus 2.
  Complex x(Real("0.3"), Real("0.7"));
  CurvePoint P{false, x, sqrt(horner(C.f, x))};
  auto a = abel_jacobi(P, d);
  CVector z(2);
  for (int i = 0; i < 2; ++i) z[i] = d.riemann_constant[i] - a[i];
  CHECK(abs(theta_scaled(z, d.theta).scaled) < tol(25));
}

TEST_CASE("archimedean pairing on the genus three example") {
  auto C = genus3();
  auto D = make_divisor(Poly{-1, 1}, Poly{3}, C);
  auto E = construct_E(D, 0, C);
  auto d = homology_and_periods(C, prec30());
  PrecisionScope s(prec30());
  auto r1 = archimedean_pairing(to_formal(D), E, d, 1);
  auto r2 = archimedean_pairing(to_formal(D), E, d, 77);
  // Non-archimedean part is log 6; the height is 1.77668.
  CHECK(abs(mp::log(Real(6)) + r1.value - Real("1.77668")) < tol(5));
  CHECK(abs(r1.value - r2.value) < tol(25));
  CHECK(abs(r1.green + 2 * r1.value) < tol(28));
}

TEST_CASE("archimedean pairing rejects non-degree-zero divisors") {
  auto C = genus3();
  auto d = homology_and_periods(C, prec30());
  auto D = to_formal(make_divisor(Poly{-1, 1}, Poly{3}, C));
  FormalDivisor bad = D;
  bad.infinity_coefficient = 0;
  CHECK_THROWS_AS(archimedean_pairing(bad, D, d), ValidationError);
}

TEST_CASE("green pairing point form checks its input") {
  auto C = genus2();
  auto d = homology_and_periods(C, prec30());
  std::vector<CurvePoint> one = {rational_point(0, 1)};
  std::vector<std::pair<CurvePoint, Rational>> ev = {{rational_point(1, 2), 1}};
  CHECK_THROWS_AS(green_pairing(one, one, ev, d), ValidationError);
}
