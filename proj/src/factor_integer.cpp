#include "hyperheight/errors.hpp"
#include "hyperheight/exact_algebra.hpp"

#include <algorithm>
#include <map>

namespace hyperheight {

namespace {

constexpr unsigned long kTrialLimit = 1000000;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

using Clock = std::chrono::steady_clock;

// Brent's variant of Pollard rho; returns a nontrivial factor or 0 when the
// deadline passes or more than max_steps iterations were spent (0: no limit).
Integer brent_rho(const Integer& n, Clock::time_point deadline, unsigned long max_steps = 0) {
  unsigned long steps = 0;
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys, tmp;
    unsigned long r = 1, m = 128;
    auto step = [&](Integer& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          tmp = abs(x - y);
          q = q * tmp;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
        steps += m;
        if (Clock::now() > deadline || (max_steps && steps > max_steps)) return 0;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        tmp = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), tmp.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

std::string describe(const std::map<Integer, int>& found) {
  std::string s;
  for (const auto& [p, e] : found) {
    if (!s.empty()) s += " * ";
    s += p.get_str();
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

// Returns (r, k) with r^k = n and k > 1 maximal, or (n, 1).
std::pair<Integer, int> perfect_power(const Integer& n) {
  if (!mpz_perfect_power_p(n.get_mpz_t())) return {n, 1};
  for (unsigned long k = mpz_sizeinbase(n.get_mpz_t(), 2); k >= 2; --k) {
    Integer r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) return {r, static_cast<int>(k)};
  }
  return {n, 1};
}

}  // namespace

bool is_probable_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

IntegerFactorization factor_integer(const Integer& n, std::chrono::milliseconds budget) {
  if (n == 0) throw ValidationError("cannot factor zero");
  auto deadline = Clock::now() + budget;
  IntegerFactorization out;
  out.sign = n < 0 ? -1 : 1;
  Integer m = abs(n);
  std::map<Integer, int> found;
  for (unsigned long p : small_primes()) {
    if (m == 1) break;
    if (Integer(p) * p > m) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      int e = 0;
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++e;
      }
      found[Integer(p)] += e;
    }
  }
  std::vector<Integer> stack;
  if (m > 1) stack.push_back(m);
  while (!stack.empty()) {
    Integer c = stack.back();
    stack.pop_back();
    if (is_probable_prime(c)) {
      found[c] += 1;
      continue;
    }
    if (auto [r, k] = perfect_power(c); k > 1) {
      for (int i = 0; i < k; ++i) stack.push_back(r);
      continue;
    }
    Integer d = brent_rho(c, deadline);
    if (d == 0) {
      Integer rest = c;
      for (const auto& s : stack) rest *= s;
      throw FactorizationBudgetExceeded("integer factorization exceeded its time budget",
                                        describe(found), rest.get_str());
    }
    stack.push_back(d);
    stack.push_back(c / d);
  }
  for (auto& [p, e] : found) out.factors.emplace_back(p, e);
  return out;
}

PartialFactorization factor_partial(const Integer& n, unsigned long rho_steps) {
  if (n == 0) throw ValidationError("cannot factor zero");
  PartialFactorization out;
  Integer m = abs(n);
  std::map<Integer, int> found;
  for (unsigned long p : small_primes()) {
    if (m == 1 || Integer(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      found[Integer(p)] += 1;
    }
  }
  std::vector<Integer> stack;
  if (m > 1) stack.push_back(m);
  auto never = Clock::time_point::max();
  while (!stack.empty()) {
    Integer c = stack.back();
    stack.pop_back();
    if (is_probable_prime(c)) {
      found[c] += 1;
      continue;
    }
    if (auto [r, k] = perfect_power(c); k > 1) {
      for (int i = 0; i < k; ++i) stack.push_back(r);
      continue;
    }
    Integer d = brent_rho(c, never, rho_steps);
    if (d == 0) {
      out.cofactor *= c;
      continue;
    }
    stack.push_back(d);
    stack.push_back(c / d);
  }
  for (auto& [p, e] : found) out.factors.emplace_back(p, e);
  return out;
}

std::vector<Integer> prime_divisors(const Integer& n, std::chrono::milliseconds budget) {
  std::vector<Integer> out;
  for (auto& [p, e] : factor_integer(n, budget).factors) out.push_back(p);
  return out;
}

}  // namespace hyperheight
