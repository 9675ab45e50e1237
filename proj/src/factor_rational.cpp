#include "padic.hpp"

#include "hyperheight/errors.hpp"

#include <algorithm>
#include <functional>

namespace hyperheight {

using namespace detail;

namespace {

// Factors a monic squarefree integer polynomial over Z (Zassenhaus).
std::vector<Poly> zassenhaus_monic(const Poly& F) {
  int n = F.degree();
  if (n <= 1) return {F};
  ZPoly Fz = F.primitive_integer();
  Integer p = 3;
  while (true) {
    ZPoly fb = zreduce(Fz, p);
    if (zdeg(fp_gcd(fb, fp_derivative(fb, p), p)) == 0) break;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
  }
  auto mod_factors = fp_factor(zreduce(Fz, p), p);
  if (mod_factors.size() == 1) return {F};

  Integer norm1 = 0;
  for (const auto& c : Fz) norm1 += abs(c);
  Integer bound = 2 * ipow(2, n) * norm1;
  long k = 1;
  Integer M = p;
  while (M <= bound) {
    M *= p;
    ++k;
  }
  std::vector<ZPoly> lifted;
  for (const auto& [g, e] : mod_factors) lifted.push_back(lift_monic_factor(Fz, g, p, k));

  std::vector<Poly> found;
  Poly rest = F;
  std::vector<int> alive(lifted.size());
  for (size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
  for (size_t s = 1; 2 * s <= alive.size();) {
    bool progress = false;
    std::vector<int> pick;
    std::function<bool(size_t)> rec = [&](size_t start) -> bool {
      if (pick.size() == s) {
        ZPoly prod{1};
        for (int i : pick) prod = zmul(prod, lifted[i], M);
        Poly cand = to_poly_symmetric(prod, M);
        auto [q, r] = divmod(rest, cand);
        if (r.is_zero() && q.is_integral()) {
          found.push_back(cand);
          rest = q;
          std::vector<int> keep;
          for (int i : alive)
            if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(i);
          alive = keep;
          return true;
        }
        return false;
      }
      for (size_t j = start; j < alive.size(); ++j) {
        pick.push_back(alive[j]);
        if (rec(j + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    progress = rec(0);
    if (!progress) ++s;
  }
  if (rest.degree() > 0) found.push_back(rest);
  return found;
}

}  // namespace

RationalFactorization factor_over_q(const Poly& f) {
  if (f.is_zero()) throw ValidationError("cannot factor the zero polynomial");
  RationalFactorization out;
  out.unit = f.lead();
  for (const auto& [g, mult] : squarefree_decomposition(f)) {
    // Monic integral transform: lc^(n-1) G(x / lc).
    ZPoly Gz = g.primitive_integer();
    Integer lc = Gz.back();
    int n = static_cast<int>(Gz.size()) - 1;
    std::vector<Integer> mz(Gz.size());
    for (int i = 0; i <= n; ++i) mz[i] = Gz[i] * ipow(lc, static_cast<unsigned long>(n - i)) / lc;
    Poly monic = Poly::from_integers(mz);
    for (const Poly& h : zassenhaus_monic(monic)) {
      // Undo the transform: h(lc x), then make monic over Q.
      Poly back = h.compose(Poly(std::vector<Rational>{0, Rational(lc)})).monic();
      out.factors.emplace_back(back, mult);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    if (a.first.coeffs() != b.first.coeffs()) return a.first.coeffs() < b.first.coeffs();
    return a.second < b.second;
  });
  return out;
}

ModPFactorization factor_mod_p(const Poly& f, const Integer& p) {
  if (!is_probable_prime(p)) throw ValidationError(p.get_str() + " is not prime");
  if (f.is_zero()) throw ValidationError("cannot factor the zero polynomial");
  ZPoly a = to_zpoly(f, p);
  if (zdeg(a) < f.degree())
    throw ValidationError("leading coefficient vanishes mod " + p.get_str() + ": degree drops from " +
                          std::to_string(f.degree()) + " to " + std::to_string(std::max(zdeg(a), 0)));
  ModPFactorization out;
  out.prime = p;
  out.unit = a.back();
  if (zdeg(a) == 0) return out;
  for (auto& [g, m] : fp_factor(a, p)) out.factors.emplace_back(to_poly(g), m);
  return out;
}

}  // namespace hyperheight
