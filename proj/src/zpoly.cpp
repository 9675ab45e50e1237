#include "zpoly.hpp"

#include "hyperheight/errors.hpp"

#include <algorithm>

namespace hyperheight::detail {

namespace {

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int zdeg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

ZPoly zreduce(ZPoly a, const Integer& m) {
  for (auto& c : a) c = mod(c, m);
  ztrim(a);
  return a;
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  return zreduce(std::move(r), m);
}

ZPoly zsub(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] -= b[i];
  }
  return zreduce(std::move(r), m);
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, const Integer& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return zreduce(std::move(r), m);
}

ZPoly zscale(const ZPoly& a, const Integer& s, const Integer& m) {
  ZPoly r = a;
  for (auto& c : r) c *= s;
  return zreduce(std::move(r), m);
}

std::pair<ZPoly, ZPoly> zdivmod_monic(const ZPoly& a, const ZPoly& b, const Integer& m) {
  int db = zdeg(b);
  if (db < 0 || b.back() != 1) throw Error("internal: division by a non-monic polynomial");
  if (zdeg(a) < db) return {ZPoly{}, a};
  ZPoly r = a;
  ZPoly q(a.size() - b.size() + 1);
  for (int i = zdeg(a); i >= db; --i) {
    Integer t = mod(r[i], m);
    if (t == 0) continue;
    q[i - db] = t;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= t * b[j];
  }
  r.resize(db);
  return {zreduce(std::move(q), m), zreduce(std::move(r), m)};
}

ZPoly zshift(const ZPoly& a, const Integer& r, const Integer& m) {
  // Horner in the shifted variable.
  ZPoly acc;
  ZPoly lin{mod(r, m), 1};
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    acc = zmul(acc, lin, m);
    acc = zadd(acc, ZPoly{*it}, m);
  }
  return acc;
}

Integer zeval(const ZPoly& a, const Integer& t, const Integer& m) {
  Integer acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = mod(acc * t + *it, m);
  return acc;
}

Integer fp_inv(const Integer& a, const Integer& p) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0)
    throw Error("internal: non-invertible element modulo " + p.get_str());
  return r;
}

ZPoly fp_monic(const ZPoly& a, const Integer& p) {
  if (a.empty()) return a;
  return zscale(a, fp_inv(a.back(), p), p);
}

std::pair<ZPoly, ZPoly> fp_divmod(const ZPoly& a, const ZPoly& b, const Integer& p) {
  if (b.empty()) throw Error("internal: division by zero polynomial mod p");
  Integer li = fp_inv(b.back(), p);
  ZPoly bm = zscale(b, li, p);
  auto [q, r] = zdivmod_monic(a, bm, p);
  return {zscale(q, li, p), r};
}

ZPoly fp_gcd(ZPoly a, ZPoly b, const Integer& p) {
  while (!b.empty()) {
    ZPoly r = fp_divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a, p);
}

FpXgcd fp_xgcd(const ZPoly& a, const ZPoly& b, const Integer& p) {
  ZPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    auto [q, r] = fp_divmod(r0, r1, p);
    ZPoly s2 = zsub(s0, zmul(q, s1, p), p);
    ZPoly t2 = zsub(t0, zmul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {};
  Integer li = fp_inv(r0.back(), p);
  return {zscale(r0, li, p), zscale(s0, li, p), zscale(t0, li, p)};
}

ZPoly fp_derivative(const ZPoly& a, const Integer& p) {
  if (a.size() <= 1) return {};
  ZPoly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<unsigned long>(i);
  return zreduce(std::move(d), p);
}

ZPoly fp_powmod(const ZPoly& base, Integer e, const ZPoly& modp, const Integer& p) {
  ZPoly result{1};
  ZPoly b = fp_divmod(base, modp, p).second;
  result = fp_divmod(result, modp, p).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = fp_divmod(zmul(result, b, p), modp, p).second;
    e >>= 1;
    if (e > 0) b = fp_divmod(zmul(b, b, p), modp, p).second;
  }
  return result;
}

namespace {

// p-th root of a polynomial whose derivative vanishes (coefficients of
// x^{kp} only); over F_p the coefficient map c -> c^{1/p} is the identity.
ZPoly pth_root(const ZPoly& a, const Integer& p) {
  unsigned long pp = p.get_ui();
  ZPoly r;
  for (size_t i = 0; i < a.size(); i += pp) r.push_back(a[i]);
  ztrim(r);
  return r;
}

// Squarefree factorization in characteristic p (monic input).
void squarefree(const ZPoly& a, const Integer& p, int mult, std::vector<std::pair<ZPoly, int>>& out) {
  if (zdeg(a) < 1) return;
  ZPoly d = fp_derivative(a, p);
  if (d.empty()) {
    squarefree(pth_root(a, p), p, mult * static_cast<int>(p.get_ui()), out);
    return;
  }
  ZPoly c = fp_gcd(a, d, p);
  ZPoly w = fp_divmod(a, c, p).first;
  int i = 1;
  while (zdeg(w) > 0) {
    ZPoly y = fp_gcd(w, c, p);
    ZPoly z = fp_divmod(w, y, p).first;
    if (zdeg(z) > 0) out.emplace_back(fp_monic(z, p), i * mult);
    ++i;
    w = y;
    c = fp_divmod(c, y, p).first;
  }
  if (zdeg(c) > 0) squarefree(pth_root(c, p), p, mult * static_cast<int>(p.get_ui()), out);
}

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<ZPoly, int>> ddf(ZPoly a, const Integer& p) {
  std::vector<std::pair<ZPoly, int>> out;
  ZPoly xp{0, 1};
  ZPoly h = xp;
  for (int d = 1; 2 * d <= zdeg(a); ++d) {
    h = fp_powmod(h, p, a, p);
    ZPoly g = fp_gcd(a, zsub(h, xp, p), p);
    if (zdeg(g) > 0) {
      out.emplace_back(g, d);
      a = fp_divmod(a, g, p).first;
      h = fp_divmod(h, a, p).second;
    }
  }
  if (zdeg(a) > 0) out.emplace_back(a, zdeg(a));
  return out;
}

ZPoly random_poly(int deg, const Integer& p, std::mt19937_64& rng) {
  ZPoly r(deg + 1);
  gmp_randclass gr(gmp_randinit_default);
  gr.seed(static_cast<unsigned long>(rng()));
  for (auto& c : r) c = gr.get_z_range(p);
  ztrim(r);
  return r;
}

// Equal-degree splitting (Cantor-Zassenhaus); input monic, product of
// irreducibles of degree d.
void edf(const ZPoly& a, int d, const Integer& p, std::mt19937_64& rng, std::vector<ZPoly>& out) {
  int n = zdeg(a);
  if (n == d) {
    out.push_back(a);
    return;
  }
  while (true) {
    ZPoly r = random_poly(n - 1, p, rng);
    if (zdeg(r) < 1) continue;
    ZPoly g;
    if (p == 2) {
      // Trace map r + r^2 + ... + r^(2^(d-1)).
      ZPoly t = r, acc = r;
      for (int i = 1; i < d; ++i) {
        t = fp_divmod(zmul(t, t, p), a, p).second;
        acc = zadd(acc, t, p);
      }
      g = fp_gcd(a, acc, p);
    } else {
      Integer e = (ipow(p, d) - 1) / 2;
      ZPoly s = fp_powmod(r, e, a, p);
      g = fp_gcd(a, zsub(s, ZPoly{1}, p), p);
    }
    if (zdeg(g) > 0 && zdeg(g) < n) {
      edf(g, d, p, rng, out);
      edf(fp_divmod(a, g, p).first, d, p, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<ZPoly, int>> fp_factor(const ZPoly& a, const Integer& p) {
  if (a.empty()) throw Error("internal: factoring the zero polynomial mod p");
  std::vector<std::pair<ZPoly, int>> sq, out;
  squarefree(fp_monic(a, p), p, 1, sq);
  std::mt19937_64 rng(0x5eedULL);
  for (auto& [s, m] : sq) {
    for (auto& [g, d] : ddf(s, p)) {
      std::vector<ZPoly> parts;
      edf(g, d, p, rng, parts);
      for (auto& q : parts) out.emplace_back(std::move(q), m);
    }
  }
  // Deterministic order: by degree, then coefficients from the top.
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    for (size_t i = x.first.size(); i-- > 0;)
      if (x.first[i] != y.first[i]) return x.first[i] < y.first[i];
    return x.second < y.second;
  });
  // Merge equal factors produced by different squarefree layers.
  std::vector<std::pair<ZPoly, int>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(std::move(e));
  }
  return merged;
}

bool fp_is_irreducible(const ZPoly& a, const Integer& p) {
  auto f = fp_factor(a, p);
  return f.size() == 1 && f[0].second == 1;
}

ZPoly to_zpoly(const Poly& f, const Integer& m) {
  ZPoly r;
  r.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) {
    Integer den = c.get_den();
    Integer g;
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    if (g != 1) throw ValidationError("coefficient " + c.get_str() + " is not integral at the modulus");
    r.push_back(mod(c.get_num() * fp_inv(mod(den, m), m), m));
  }
  ztrim(r);
  return r;
}

Poly to_poly(const ZPoly& a) { return Poly::from_integers(a); }

Poly to_poly_symmetric(const ZPoly& a, const Integer& m) {
  std::vector<Integer> v = a;
  Integer half = m / 2;
  for (auto& c : v) {
    c = mod(c, m);
    if (c > half) c -= m;
  }
  return Poly::from_integers(v);
}

Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

}  // namespace hyperheight::detail
