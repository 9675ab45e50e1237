#include "padic.hpp"

#include "hyperheight/errors.hpp"

#include <algorithm>
#include <limits>

namespace hyperheight {

using detail::ZPoly;
using namespace detail;

namespace detail {

ZPoly lift_monic_factor(const ZPoly& P, const ZPoly& g0, const Integer& p, long prec) {
  ZPoly g = fp_monic(g0, p);
  ZPoly h0 = zdivmod_monic(zreduce(P, p), g, p).first;
  FpXgcd e = fp_xgcd(h0, g, p);
  if (zdeg(e.g) != 0) throw Error("internal: Hensel factors are not coprime");
  ZPoly t = e.s;
  Integer M = ipow(p, prec);
  Integer m = p;
  while (m < M) {
    Integer m2 = m * m;
    if (m2 > M) m2 = M;
    ZPoly Pm = zreduce(P, m2);
    ZPoly r = zdivmod_monic(Pm, g, m2).second;
    ZPoly delta = zdivmod_monic(zmul(t, r, m2), g, m2).second;
    g = zadd(g, delta, m2);
    ZPoly h = zdivmod_monic(Pm, g, m2).first;
    ZPoly th = zmul(t, h, m2);
    ZPoly two_minus = zsub(ZPoly{2}, th, m2);
    t = zdivmod_monic(zmul(t, two_minus, m2), g, m2).second;
    m = m2;
  }
  return g;
}

}  // namespace detail

namespace {

constexpr long kInf = std::numeric_limits<long>::max();

long zval(const Integer& c, const Integer& p, long cap) {
  if (c == 0) return kInf;
  long v = static_cast<long>(mpz_scan1(c.get_mpz_t(), 0));
  if (p != 2) {
    Integer t;
    v = static_cast<long>(mpz_remove(t.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t()));
  }
  return v >= cap ? kInf : v;
}

struct NPRoots {
  std::vector<std::pair<Rational, int>> segments;  // (root valuation, count), descending
  int n_inf = 0;                                    // roots of unresolved (huge) valuation
};

// Root valuations of a monic polynomial known modulo p^prec.
NPRoots root_valuations(const ZPoly& H, const Integer& p, long prec) {
  int n = zdeg(H);
  std::vector<long> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = i < static_cast<int>(H.size()) ? zval(H[i], p, prec) : kInf;
  NPRoots out;
  int i = 0;
  while (i <= n && v[i] == kInf) ++i;
  out.n_inf = i;
  while (i < n) {
    int best = -1;
    Rational best_slope;
    for (int j = i + 1; j <= n; ++j) {
      if (v[j] == kInf) continue;
      Rational s(v[j] - v[i], j - i);
      if (best < 0 || s <= best_slope) {
        best = j;
        best_slope = s;
      }
    }
    out.segments.emplace_back(-best_slope, best - i);
    i = best;
  }
  return out;
}

using Fac = LocalFactor;

std::vector<Fac> factor_monic(const ZPoly& G, long prec, const Integer& p);

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// F_z(z) = p^(s deg) F_w(z / p^s).
ZPoly unscale(const ZPoly& Fw, long s, const Integer& p, const Integer& M) {
  int d = zdeg(Fw);
  ZPoly r(Fw.size());
  for (int j = 0; j <= d; ++j) r[j] = Fw[j] * ipow(p, static_cast<unsigned long>(s * (d - j)));
  return zreduce(std::move(r), M);
}

// Splits a primitive polynomial into a monic factor carrying the integral
// roots and a cofactor carrying the roots of negative valuation.
std::pair<ZPoly, ZPoly> split_integral(const ZPoly& P, const Integer& p, long prec) {
  Integer M = ipow(p, prec);
  ZPoly Pbar = zreduce(P, p);
  if (Pbar.empty()) throw Error("internal: polynomial is not primitive");
  if (zdeg(Pbar) == zdeg(P)) {
    ZPoly monic = zscale(P, fp_inv(P.back() % M, M), M);
    return {monic, ZPoly{1}};
  }
  if (zdeg(Pbar) == 0) return {ZPoly{1}, P};
  ZPoly g = lift_monic_factor(P, fp_monic(Pbar, p), p, prec);
  // Cofactor by division; the remainder vanishes modulo p^prec.
  auto [q, r] = zdivmod_monic(zreduce(P, M), g, M);
  return {g, q};
}

Fac irreducible(const ZPoly& g, long prec, int f, int e) { return {g, prec, true, f, e, false}; }

std::vector<Fac> refine_linear(const ZPoly& G, const ZPoly& phi, int k, long prec, const Integer& p);
std::vector<Fac> refine_higher(const ZPoly& G, const ZPoly& phi, int k, long prec, const Integer& p);

std::vector<Fac> factor_monic(const ZPoly& G, long prec, const Integer& p) {
  if (prec < 1) throw PrecisionError("p-adic precision exhausted; raise the requested digits");
  int n = zdeg(G);
  if (n < 1) return {};
  if (n == 1) return {irreducible(G, prec, 1, 1)};
  auto fac = fp_factor(zreduce(G, p), p);
  std::vector<Fac> out;
  auto handle = [&](const ZPoly& block, const ZPoly& phi, int k) {
    std::vector<Fac> part;
    if (k == 1)
      part = {irreducible(block, prec, zdeg(phi), 1)};
    else if (zdeg(phi) == 1)
      part = refine_linear(block, phi, k, prec, p);
    else
      part = refine_higher(block, phi, k, prec, p);
    out.insert(out.end(), part.begin(), part.end());
  };
  if (fac.size() == 1) {
    handle(G, fac[0].first, fac[0].second);
    return out;
  }
  for (const auto& [phi, k] : fac) {
    ZPoly block{1};
    for (int i = 0; i < k; ++i) block = zmul(block, phi, p);
    handle(lift_monic_factor(G, block, p, prec), phi, k);
  }
  return out;
}

// Residual polynomial test for a single Newton segment of slope h/e.
bool residual_irreducible(const ZPoly& H, const Rational& val, int k, const Integer& p) {
  long h = val.get_num().get_si();
  long e = val.get_den().get_si();
  long top = k / e;
  ZPoly R(top + 1);
  for (long t = 0; t <= top; ++t) {
    long idx = t * e;
    long expect = (k - idx) * h / e;
    Integer c = idx < static_cast<long>(H.size()) ? H[idx] : Integer(0);
    Integer q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), ipow(p, expect).get_mpz_t());
    R[t] = q;
  }
  R = zreduce(R, p);
  if (zdeg(R) != top) return false;
  return fp_is_irreducible(R, p);
}

std::vector<Fac> refine_linear(const ZPoly& G, const ZPoly& phi, int k, long prec, const Integer& p) {
  Integer M = ipow(p, prec);
  Integer r = (p - phi[0]) % p;
  ZPoly H = zshift(G, r, M);
  NPRoots np = root_valuations(H, p, prec);
  auto back = [&](const ZPoly& Hz) { return zshift(Hz, Integer(-r), M); };

  if (np.segments.empty()) throw PrecisionError("p-adic factors coincide at the working precision; raise digits");
  Rational vmin = np.segments.back().first;
  Rational vmax = np.n_inf > 0 ? Rational(np.segments.front().first + 1) : np.segments.front().first;
  Integer s = floor_q(vmin);

  if (s >= 1) {
    // Every root is divisible by p^s: rescale and recurse.
    long sl = s.get_si();
    long loss = sl * k;
    ZPoly Hw(H.size());
    for (int i = 0; i <= k; ++i) {
      Integer c = i < static_cast<int>(H.size()) ? H[i] : Integer(0);
      Integer d = ipow(p, static_cast<unsigned long>(sl * (k - i)));
      if (c % d != 0) throw PrecisionError("p-adic rescaling lost precision; raise digits");
      Hw[i] = c / d;
    }
    ZPoly Hs = zreduce(Hw, ipow(p, prec - loss));
    std::vector<Fac> out;
    for (auto& fw : factor_monic(Hs, prec - loss, p)) {
      fw.poly = back(unscale(fw.poly, sl, p, M));
      out.push_back(std::move(fw));
    }
    return out;
  }

  if (vmax >= 1) {
    // Separate the roots of valuation >= 1 from those in (0, 1).
    ZPoly P(H.size());
    long c = kInf;
    for (int i = 0; i <= k; ++i) {
      Integer hi = i < static_cast<int>(H.size()) ? H[i] : Integer(0);
      P[i] = hi * ipow(p, i);
      long v = zval(P[i] % M, p, prec);
      if (v != kInf) c = std::min(c, v);
    }
    long newprec = prec - c;
    if (newprec < 1) throw PrecisionError("p-adic precision exhausted; raise digits");
    Integer Mc = ipow(p, newprec);
    for (auto& x : P) x = (x % M) / ipow(p, c);
    P = zreduce(P, Mc);
    auto [A, B] = split_integral(P, p, newprec);
    ZPoly Az = unscale(A, 1, p, Mc);
    ZPoly Bz = zdivmod_monic(zreduce(H, Mc), Az, Mc).first;
    std::vector<Fac> out;
    for (const ZPoly& part : {Az, Bz}) {
      if (zdeg(part) < 1) continue;
      auto sub = factor_monic(back(zreduce(part, Mc)), newprec, p);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  // All roots have valuation in (0, 1).
  if (np.segments.size() == 1 && np.n_inf == 0) {
    const Rational& v = np.segments[0].first;
    int e = static_cast<int>(v.get_den().get_si());
    if (e == k) return {irreducible(G, prec, 1, e)};
    if (residual_irreducible(H, v, k, p)) return {irreducible(G, prec, k / e, e)};
  }
  return {Fac{G, prec, false, 1, 0, false}};
}

std::vector<Fac> refine_higher(const ZPoly& G, const ZPoly& phi, int k, long prec, const Integer& p) {
  // phi-adic expansion G = sum a_j phi^j.
  Integer M = ipow(p, prec);
  std::vector<long> v;
  ZPoly rest = G;
  for (int j = 0; j < k; ++j) {
    auto [q, r] = zdivmod_monic(rest, phi, M);
    long vj = kInf;
    for (const auto& c : r) vj = std::min(vj, zval(c, p, prec));
    v.push_back(vj);
    rest = q;
  }
  long v0 = v[0];
  if (v0 != kInf) {
    Integer g;
    mpz_gcd_ui(g.get_mpz_t(), Integer(v0).get_mpz_t(), static_cast<unsigned long>(k));
    bool on_or_above = true;
    for (int j = 1; j < k; ++j)
      if (v[j] != kInf && Rational(v[j]) < Rational(v0 * (k - j), k)) on_or_above = false;
    if (g == 1 && on_or_above) return {irreducible(G, prec, zdeg(phi), k)};
  }
  return {Fac{G, prec, false, zdeg(phi), 0, false}};
}

std::vector<Fac> local_factors_once(const Poly& f, const Integer& p, long W) {
  Integer M = ipow(p, W);
  ZPoly P = zreduce(f.primitive_integer(), M);
  // primitive_integer is primitive over Z; recheck at p for safety.
  auto [A, B] = split_integral(P, p, W);
  std::vector<Fac> out = factor_monic(A, W, p);
  if (zdeg(B) >= 1) {
    ZPoly Brev(B.rbegin(), B.rend());
    Brev = zreduce(Brev, M);
    Brev = zscale(Brev, fp_inv(Brev.back(), M), M);
    for (auto& fu : factor_monic(Brev, W, p)) {
      fu.at_infinity = true;
      out.push_back(std::move(fu));
    }
  }
  return out;
}

}  // namespace

namespace detail {

std::vector<LocalFactor> padic_local_factors(const Poly& f, const Integer& p, long digits) {
  if (f.degree() < 1) throw ValidationError("p-adic factorization needs a nonconstant polynomial");
  if (!is_probable_prime(p)) throw ValidationError(p.get_str() + " is not prime");
  if (digits < 1) throw ValidationError("p-adic precision must be positive");
  if (gcd(f, f.derivative()).degree() > 0) throw ValidationError("polynomial is not squarefree");
  long W = digits + 8;
  for (int attempt = 0; attempt < 6; ++attempt, W *= 2) {
    std::vector<LocalFactor> out;
    try {
      out = local_factors_once(f, p, W);
    } catch (const PrecisionError&) {
      continue;
    }
    bool enough = std::all_of(out.begin(), out.end(), [&](const auto& x) { return x.precision >= digits; });
    if (!enough) continue;
    Integer M = ipow(p, digits);
    for (auto& x : out) {
      x.poly = zreduce(x.poly, M);
      x.precision = digits;
    }
    return out;
  }
  throw PrecisionError("p-adic factors could not be separated; raise the requested digits");
}

}  // namespace detail

PAdicFactorization padic_factor(const Poly& f, const Integer& p, long digits) {
  auto local = detail::padic_local_factors(f, p, digits);
  PAdicFactorization out;
  out.prime = p;
  out.precision = digits;
  Rational lead_product = 1;
  for (auto& lf : local) {
    PAdicFactor pf;
    if (lf.at_infinity) {
      ZPoly rev(lf.poly.rbegin(), lf.poly.rend());
      pf.poly = to_poly(rev);
    } else {
      pf.poly = to_poly(lf.poly);
    }
    lead_product *= pf.poly.lead();
    pf.certified = lf.certified;
    pf.residue_degree = lf.residue_degree;
    pf.ramification = lf.ramification;
    out.factors.push_back(std::move(pf));
  }
  // f = c * P with P primitive; the unit is c times the p-adic unit
  // lc(P) / prod lc(F_i), reduced modulo p^digits.
  Integer M = ipow(p, digits);
  ZPoly P = f.primitive_integer();
  Rational c = f.lead() / Rational(P.back());
  Integer lp = P.back(), lq = lead_product.get_num(), t;
  long v = static_cast<long>(mpz_remove(lp.get_mpz_t(), lp.get_mpz_t(), p.get_mpz_t()));
  long w = static_cast<long>(mpz_remove(lq.get_mpz_t(), lq.get_mpz_t(), p.get_mpz_t()));
  if (v != w) throw PrecisionError("p-adic factor leading coefficients lost precision; raise digits");
  Integer u = lp * fp_inv(lq % M, M) % M;
  out.unit = c * Rational(u);
  std::sort(out.factors.begin(), out.factors.end(), [](const PAdicFactor& a, const PAdicFactor& b) {
    if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
    return a.poly.coeffs() < b.poly.coeffs();
  });
  return out;
}

}  // namespace hyperheight
