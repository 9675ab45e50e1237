#include "hyperheight/numeric.hpp"

#include "hyperheight/errors.hpp"

#include <algorithm>
#include <sstream>

namespace hyperheight {

void Precision::validate() const {
  if (digits < 15) throw ValidationError("precision must be at least 15 digits, got " + std::to_string(digits));
  if (guard < 1) throw ValidationError("guard digits must be positive");
}

PrecisionScope::PrecisionScope(const Precision& p) : PrecisionScope(p.working_digits()) {}

PrecisionScope::PrecisionScope(int decimal_digits) : saved_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(decimal_digits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = o.re * o.re + o.im * o.im;
  Real r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(const Complex& a, const Complex& b) {
  Complex r = a;
  return r *= b;
}
Complex operator/(const Complex& a, const Complex& b) {
  Complex r = a;
  return r /= b;
}
Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const Complex& z) { return boost::multiprecision::atan2(z.im, z.re); }

Complex exp(const Complex& z) {
  Real m = boost::multiprecision::exp(z.re);
  return {m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im)};
}

Complex log(const Complex& z) { return {boost::multiprecision::log(abs(z)), arg(z)}; }

Complex sqrt(const Complex& z) {
  if (z.re == 0 && z.im == 0) return {};
  // Take the root of the non-cancelling half and divide for the other one.
  Real r = abs(z);
  if (z.re >= 0) {
    Real a = boost::multiprecision::sqrt((r + z.re) / 2);
    return {a, z.im / (2 * a)};
  }
  Real b = boost::multiprecision::sqrt((r - z.re) / 2);
  if (z.im < 0) b = -b;
  return {z.im / (2 * b), b};
}

Complex expi(const Real& t) { return {boost::multiprecision::cos(t), boost::multiprecision::sin(t)}; }

Real to_real(const Rational& q) {
  Real n(q.get_num().get_str()), d(q.get_den().get_str());
  return n / d;
}

Complex to_complex(const Rational& q) { return Complex(to_real(q)); }

Real pi() { return boost::math::constants::pi<Real>(); }

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string to_string(const Complex& z, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << z.re << (z.im < 0 ? " - " : " + ") << boost::multiprecision::abs(z.im) << "i";
  return os.str();
}

Complex horner(const Poly& f, const Complex& x) {
  Complex r;
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + to_complex(*it);
  return r;
}

namespace {

Complex horner_c(const CVector& c, const Complex& x) {
  Complex r;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

}  // namespace

std::vector<Complex> polynomial_roots(const Poly& f) {
  int n = f.degree();
  if (n < 1) return {};
  CVector c, dc;
  for (const auto& q : f.coeffs()) c.push_back(to_complex(q));
  for (int i = 1; i <= n; ++i) dc.push_back(Real(i) * c[i]);
  Real bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, Real(abs(c[i] / c[n])));
  bound += 1;
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = bound * expi(2 * pi() * k / n + Real("0.4"));
  Real eps = boost::multiprecision::pow(Real(10), -static_cast<int>(Real::default_precision()) + 3);
  bool done = false;
  for (int iter = 0; iter < 2000 && !done; ++iter) {
    done = true;
    for (int k = 0; k < n; ++k) {
      Complex w = horner_c(c, z[k]) / horner_c(dc, z[k]);
      Complex s;
      for (int j = 0; j < n; ++j)
        if (j != k) s += Complex(1) / (z[k] - z[j]);
      Complex step = w / (Complex(1) - w * s);
      z[k] -= step;
      if (abs(step) > eps * std::max(Real(1), Real(abs(z[k])))) done = false;
    }
  }
  if (!done) throw NumericalDegeneracy("polynomial root finder did not converge for " + f.to_string());
  return z;
}

CMatrix inverse(const CMatrix& A) {
  size_t n = A.size();
  CMatrix M = A, R(n, CVector(n));
  for (size_t i = 0; i < n; ++i) R[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t i = c + 1; i < n; ++i)
      if (abs(M[i][c]) > abs(M[piv][c])) piv = i;
    if (abs(M[piv][c]) == 0) throw NumericalDegeneracy("singular complex matrix");
    std::swap(M[piv], M[c]);
    std::swap(R[piv], R[c]);
    Complex inv = Complex(1) / M[c][c];
    for (size_t j = 0; j < n; ++j) {
      M[c][j] *= inv;
      R[c][j] *= inv;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      Complex q = M[i][c];
      for (size_t j = 0; j < n; ++j) {
        M[i][j] -= q * M[c][j];
        R[i][j] -= q * R[c][j];
      }
    }
  }
  return R;
}

RMatrix inverse(const RMatrix& A) {
  size_t n = A.size();
  RMatrix M = A, R(n, RVector(n, Real(0)));
  for (size_t i = 0; i < n; ++i) R[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t i = c + 1; i < n; ++i)
      if (boost::multiprecision::abs(M[i][c]) > boost::multiprecision::abs(M[piv][c])) piv = i;
    if (M[piv][c] == 0) throw NumericalDegeneracy("singular real matrix");
    std::swap(M[piv], M[c]);
    std::swap(R[piv], R[c]);
    Real inv = 1 / M[c][c];
    for (size_t j = 0; j < n; ++j) {
      M[c][j] *= inv;
      R[c][j] *= inv;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      Real q = M[i][c];
      for (size_t j = 0; j < n; ++j) {
        M[i][j] -= q * M[c][j];
        R[i][j] -= q * R[c][j];
      }
    }
  }
  return R;
}

RMatrix cholesky_upper(const RMatrix& A) {
  size_t n = A.size();
  RMatrix T(n, RVector(n, Real(0)));
  for (size_t i = 0; i < n; ++i) {
    Real d = A[i][i];
    for (size_t k = 0; k < i; ++k) d -= T[k][i] * T[k][i];
    if (d <= 0) throw NumericalDegeneracy("matrix is not positive definite");
    T[i][i] = boost::multiprecision::sqrt(d);
    for (size_t j = i + 1; j < n; ++j) {
      Real s = A[i][j];
      for (size_t k = 0; k < i; ++k) s -= T[k][i] * T[k][j];
      T[i][j] = s / T[i][i];
    }
  }
  return T;
}

RMatrix imag_part(const CMatrix& A) {
  RMatrix R(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (const auto& z : A[i]) R[i].push_back(z.im);
  return R;
}

RMatrix real_part(const CMatrix& A) {
  RMatrix R(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (const auto& z : A[i]) R[i].push_back(z.re);
  return R;
}

CMatrix transpose(const CMatrix& A) {
  if (A.empty()) return {};
  CMatrix T(A[0].size(), CVector(A.size()));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
  return T;
}

CMatrix multiply(const CMatrix& A, const CMatrix& B) {
  size_t n = A.size(), m = B.empty() ? 0 : B[0].size();
  CMatrix R(n, CVector(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < B.size(); ++k)
      for (size_t j = 0; j < m; ++j) R[i][j] += A[i][k] * B[k][j];
  return R;
}

CVector multiply(const CMatrix& A, const CVector& v) {
  CVector r(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += A[i][j] * v[j];
  return r;
}

RVector multiply(const RMatrix& A, const RVector& v) {
  RVector r(A.size(), Real(0));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += A[i][j] * v[j];
  return r;
}

RVector imag_part(const CVector& v) {
  RVector r;
  for (const auto& z : v) r.push_back(z.im);
  return r;
}

Real dot(const RVector& a, const RVector& b) {
  Real s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace hyperheight
