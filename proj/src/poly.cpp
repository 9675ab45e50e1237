#include "hyperheight/errors.hpp"
#include "hyperheight/exact_algebra.hpp"

#include <sstream>

namespace hyperheight {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

Poly::Poly(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(const Rational& c, int n) {
  std::vector<Rational> v(n + 1);
  v[n] = c;
  return Poly(std::move(v));
}

Poly Poly::from_integers(const std::vector<Integer>& coeffs) {
  std::vector<Rational> v;
  v.reserve(coeffs.size());
  for (const auto& c : coeffs) v.emplace_back(c);
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

const Rational& Poly::lead() const {
  if (c_.empty()) throw ValidationError("leading coefficient of the zero polynomial");
  return c_.back();
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  *this = *this * o;
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Rational Poly::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> v(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<long>(i);
  return Poly(std::move(v));
}

Poly Poly::monic() const {
  if (c_.empty()) return {};
  Rational l = c_.back();
  Poly r = *this;
  for (auto& c : r.c_) c /= l;
  return r;
}

Poly Poly::compose(const Poly& inner) const {
  Poly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * inner;
    acc += constant(*it);
  }
  return acc;
}

Poly Poly::shift(const Rational& r) const { return compose(Poly(std::vector<Rational>{r, 1})); }

Poly Poly::reversed(int n) const {
  if (degree() > n) throw ValidationError("reversal length below degree");
  std::vector<Rational> v(n + 1);
  for (size_t i = 0; i < c_.size(); ++i) v[n - i] = c_[i];
  return Poly(std::move(v));
}

bool Poly::is_integral() const {
  for (const auto& c : c_)
    if (c.get_den() != 1) return false;
  return true;
}

Integer Poly::denominator() const {
  Integer d = 1;
  for (const auto& c : c_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
  return d;
}

std::vector<Integer> Poly::primitive_integer() const {
  if (c_.empty()) return {};
  Integer d = denominator();
  std::vector<Integer> v;
  v.reserve(c_.size());
  Integer g = 0;
  for (const auto& c : c_) {
    Integer n = c.get_num() * (d / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    v.push_back(n);
  }
  if (v.back() < 0) g = -g;
  for (auto& n : v) n /= g;
  return v;
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = c_[i];
    if (c == 0) continue;
    Rational a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Rational> v(x.size() + y.size() - 1);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < y.size(); ++j) v[i + j] += x[i] * y[j];
  }
  return Poly(std::move(v));
}

Poly operator*(Poly a, const Rational& s) { return a *= s; }
Poly operator*(const Rational& s, Poly a) { return a *= s; }

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ValidationError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rational> r = a.coeffs();
  std::vector<Rational> q(a.degree() - b.degree() + 1);
  const auto& bc = b.coeffs();
  const Rational& lb = b.lead();
  int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Rational t = r[i] / lb;
    q[i - db] = t;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= t * bc[j];
  }
  r.resize(db);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtendedGcd ext_gcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b, s0 = Poly::constant(1), s1, t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {Poly(), Poly(), Poly()};
  Rational l = r0.lead();
  return {r0 * (1 / l), s0 * (1 / l), t0 * (1 / l)};
}

Poly inverse_mod(const Poly& a, const Poly& m) {
  auto e = ext_gcd(a % m, m);
  if (e.g.degree() != 0) throw ValidationError("polynomial is not invertible modulo " + m.to_string());
  return e.s % m;
}

Rational resultant(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) throw ValidationError("resultant of two zero polynomials");
    const Poly& other = a.is_zero() ? b : a;
    return other.degree() == 0 ? 1 : 0;
  }
  Rational acc = 1;
  Poly p = a, q = b;
  while (true) {
    int m = p.degree(), n = q.degree();
    if (n == 0) {
      Rational l = q.lead(), r = 1;
      for (int i = 0; i < m; ++i) r *= l;
      return acc * r;
    }
    if (m == 0) {
      Rational l = p.lead(), r = 1;
      for (int i = 0; i < n; ++i) r *= l;
      return acc * r;
    }
    Poly r = p % q;
    if (r.is_zero()) return 0;
    if ((m * n) % 2 == 1) acc = -acc;
    Rational l = q.lead();
    for (int i = 0; i < m - r.degree(); ++i) acc *= l;
    p = std::move(q);
    q = std::move(r);
  }
}

Rational discriminant(const Poly& f) {
  int n = f.degree();
  if (n < 1) throw ValidationError("discriminant of a constant polynomial");
  Rational r = resultant(f, f.derivative()) / f.lead();
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

std::optional<long> valuation(const Integer& x, const Integer& p) {
  if (p < 2) throw ValidationError("valuation base must be a prime");
  if (x == 0) return std::nullopt;
  Integer t;
  long v = static_cast<long>(mpz_remove(t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
  return v;
}

std::optional<long> valuation(const Rational& x, const Integer& p) {
  if (x == 0) return std::nullopt;
  return *valuation(x.get_num(), p) - *valuation(x.get_den(), p);
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f) {
  if (f.degree() < 1) return {};
  std::vector<std::pair<Poly, int>> out;
  Poly fm = f.monic();
  Poly d = fm.derivative();
  Poly a = gcd(fm, d);
  Poly b = fm / a;
  Poly c = d / a;
  Poly dd = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    Poly g = gcd(b, dd);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = dd / g;
    dd = c - b.derivative();
  }
  return out;
}

}  // namespace hyperheight
