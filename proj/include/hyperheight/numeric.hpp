#pragma once

#include "hyperheight/exact_algebra.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace hyperheight {

using Real = boost::multiprecision::mpfr_float;

// Decimal working precision: results target 10^-digits, arithmetic runs at
// digits + guard.
struct Precision {
  int digits = 30;
  int guard = 10;

  int working_digits() const { return digits + guard; }
  void validate() const;  // digits >= 15, guard >= 1
};

// Sets the MPFR default precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(const Precision& p);
  explicit PrecisionScope(int decimal_digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

struct Complex {
  Real re, im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(int r) : re(r), im(0) {}   // NOLINT(google-explicit-constructor)

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return {-re, -im}; }
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Real& s, const Complex& a);
Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);  // principal branch, cut along the negative reals
Complex expi(const Real& t);     // exp(i t)
Complex to_complex(const Rational& q);
Real to_real(const Rational& q);
Real pi();
std::string to_string(const Real& x, int digits);
std::string to_string(const Complex& z, int digits);

using CVector = std::vector<Complex>;
using CMatrix = std::vector<CVector>;  // row major
using RVector = std::vector<Real>;
using RMatrix = std::vector<RVector>;

Complex horner(const Poly& f, const Complex& x);
// All complex roots of a squarefree polynomial, polished to working precision.
std::vector<Complex> polynomial_roots(const Poly& f);

CMatrix inverse(const CMatrix& A);  // Gaussian elimination with partial pivoting
RMatrix inverse(const RMatrix& A);
// Upper triangular T with A = T^T T; throws NumericalDegeneracy unless A is positive definite.
RMatrix cholesky_upper(const RMatrix& A);
RMatrix imag_part(const CMatrix& A);
RMatrix real_part(const CMatrix& A);
CMatrix transpose(const CMatrix& A);
CMatrix multiply(const CMatrix& A, const CMatrix& B);
CVector multiply(const CMatrix& A, const CVector& v);
RVector multiply(const RMatrix& A, const RVector& v);
RVector imag_part(const CVector& v);
Real dot(const RVector& a, const RVector& b);

}  // namespace hyperheight
