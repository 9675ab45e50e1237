#pragma once

#include <gmpxx.h>

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperheight {

using Integer = mpz_class;
using Rational = mpq_class;

// Dense univariate polynomial over Q, coefficients stored constant term first.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(std::initializer_list<long> coeffs);

  static Poly constant(const Rational& c);
  static Poly monomial(const Rational& c, int n);
  static Poly x() { return monomial(1, 1); }
  static Poly from_integers(const std::vector<Integer>& coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  Rational coeff(int i) const;
  const Rational& lead() const;
  const std::vector<Rational>& coeffs() const { return c_; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& s);
  Poly operator-() const;

  Rational operator()(const Rational& t) const;
  Poly derivative() const;
  Poly monic() const;
  Poly compose(const Poly& inner) const;
  Poly shift(const Rational& r) const;  // p(x + r)
  Poly reversed(int n) const;           // x^n p(1/x)

  bool is_integral() const;
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  // Least common denominator of the coefficients.
  Integer denominator() const;
  // Integer primitive polynomial with positive leading coefficient,
  // proportional to this one.
  std::vector<Integer> primitive_integer() const;

  std::string to_string(const std::string& var = "x") const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(Poly a, const Rational& s);
Poly operator*(const Rational& s, Poly a);

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
// Monic gcd (zero if both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);
// Returns (g, s, t) with s*a + t*b = g, g monic.
struct ExtendedGcd {
  Poly g, s, t;
};
ExtendedGcd ext_gcd(const Poly& a, const Poly& b);
// Inverse of a modulo m; throws ValidationError when not coprime.
Poly inverse_mod(const Poly& a, const Poly& m);

Rational resultant(const Poly& a, const Poly& b);
Rational discriminant(const Poly& f);

// p-adic valuation; nullopt stands for +infinity (x = 0).
std::optional<long> valuation(const Integer& x, const Integer& p);
std::optional<long> valuation(const Rational& x, const Integer& p);

// Yun decomposition over Q: f = lead * prod g_i^i with g_i monic squarefree.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f);

// ---------------------------------------------------------------------------
// Integer factorization

bool is_probable_prime(const Integer& n);

struct IntegerFactorization {
  int sign = 1;
  std::vector<std::pair<Integer, int>> factors;  // ascending primes
};

IntegerFactorization factor_integer(const Integer& n,
                                    std::chrono::milliseconds budget = std::chrono::seconds(30));
// Deterministic partial factorization: trial division, then at most rho_steps
// Pollard rho iterations per composite. cofactor is the unfactored composite
// part (1 when the factorization is complete).
struct PartialFactorization {
  std::vector<std::pair<Integer, int>> factors;  // ascending primes
  Integer cofactor = 1;
};

PartialFactorization factor_partial(const Integer& n, unsigned long rho_steps);
std::vector<Integer> prime_divisors(const Integer& n,
                                    std::chrono::milliseconds budget = std::chrono::seconds(30));

// ---------------------------------------------------------------------------
// Factorization over finite fields, Q_p and Q

struct ModPFactorization {
  Integer prime;
  Integer unit;                                // leading coefficient mod p
  std::vector<std::pair<Poly, int>> factors;   // monic, coefficients in [0, p)
};

ModPFactorization factor_mod_p(const Poly& f, const Integer& p);

struct PAdicFactor {
  // Integer polynomial, exact modulo p^precision. Monic when the roots are
  // p-integral; otherwise primitive with a leading coefficient divisible by p.
  Poly poly;
  int multiplicity = 1;
  // True when irreducibility was proven from Newton polygon data.
  bool certified = true;
  int residue_degree = 1;
  int ramification = 1;
};

struct PAdicFactorization {
  Integer prime;
  long precision = 0;
  Rational unit;
  std::vector<PAdicFactor> factors;
};

PAdicFactorization padic_factor(const Poly& f, const Integer& p, long digits);

struct RationalFactorization {
  Rational unit;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible over Q
};

RationalFactorization factor_over_q(const Poly& f);

}  // namespace hyperheight
