#include "hyperheight/local.hpp"

#include "hyperheight/errors.hpp"
#include "padic.hpp"
#include "qlinalg.hpp"

#include <algorithm>
#include <set>

namespace hyperheight {

using namespace detail;

namespace {

// v = u^(g+1) b(1/u) modulo a(u).
Poly infinity_chart_y(const Poly& b, const Poly& a, int genus) {
  Poly uinv = inverse_mod(Poly::x(), a);
  Poly acc, power = Poly::constant(1);
  for (int i = 0; i <= b.degree(); ++i) {
    acc += power * b.coeff(i);
    power = (power * uinv) % a;
  }
  return (acc * Poly::monomial(1, genus + 1)) % a;
}

bool contains(const std::vector<ZPoly>& list, const ZPoly& x) { return std::find(list.begin(), list.end(), x) != list.end(); }

std::vector<ZPoly> nonregular_zpolys(const HyperellipticCurve& C, const Integer& p) {
  Integer M = p * p;
  ZPoly f = to_zpoly(C.f, M);
  ZPoly fbar = zreduce(f, p);
  ZPoly df = fp_derivative(fbar, p);
  ZPoly G = p == 2 ? df : fp_gcd(fbar, df, p);
  std::vector<ZPoly> out;
  if (zdeg(G) < 1) return out;
  for (const auto& [phi, mult] : fp_factor(G, p)) {
    // The fibre is singular above phi; the surface is regular there iff
    // y0^2 - f(t) is nonzero in Z[t]/(phi, p^2) for any lift of the point.
    ZPoly y0;
    if (p == 2) {
      Integer e = detail::ipow(Integer(2), static_cast<unsigned long>(zdeg(phi) - 1));
      y0 = fp_powmod(fbar, e, phi, p);
    }
    ZPoly F = zsub(zmul(y0, y0, M), f, M);
    if (zdivmod_monic(F, phi, M).second.empty()) out.push_back(phi);
  }
  return out;
}

long valuation_or_throw(const Rational& q, const Integer& p) {
  auto v = valuation(q, p);
  if (!v) throw Error("internal: valuation of zero");
  return *v;
}

}  // namespace

std::vector<Poly> nonregular_reductions(const HyperellipticCurve& C, const Integer& p) {
  if (p < 2 || !is_probable_prime(p)) throw ValidationError("p must be prime, got " + p.get_str());
  std::vector<Poly> out;
  for (const auto& z : nonregular_zpolys(C, p)) out.push_back(to_poly(z));
  return out;
}

std::vector<LocalPrimeDivisor> split_padic(const FormalDivisor& D, const HyperellipticCurve& C, const Integer& p,
                                           long digits, const std::string& prefix) {
  if (p < 2 || !is_probable_prime(p)) throw ValidationError("p must be prime, got " + p.get_str());
  if (digits < 1) throw ValidationError("digits must be positive");
  auto bad = nonregular_zpolys(C, p);
  std::vector<LocalPrimeDivisor> out;
  for (size_t i = 0; i < D.terms.size(); ++i) {
    const auto& t = D.terms[i];
    std::string term = prefix + std::to_string(i);
    auto pieces = padic_local_factors(t.a, p, digits);
    for (size_t j = 0; j < pieces.size(); ++j) {
      const auto& lf = pieces[j];
      LocalPrimeDivisor L;
      L.prime = p;
      L.chart = lf.at_infinity ? Chart::Infinity : Chart::Affine;
      L.fibre = t.kind == DivisorTerm::Kind::Fibre;
      L.a_local = to_poly_symmetric(lf.poly, detail::ipow(p, static_cast<unsigned long>(lf.precision)));
      L.multiplicity = t.coefficient;
      L.precision = lf.precision;
      L.certified = lf.certified;
      L.residue_degree = lf.residue_degree;
      L.ramification = lf.ramification;
      L.term = term;
      L.id = term + "." + std::to_string(j);
      if (!L.fibre) L.b_local = lf.at_infinity ? infinity_chart_y(t.b, L.a_local, C.genus) : t.b % L.a_local;
      if (!lf.at_infinity) {
        ZPoly phi = fp_factor(zreduce(lf.poly, p), p).front().first;
        L.regular = !contains(bad, phi);
      }
      out.push_back(std::move(L));
    }
  }
  if (D.infinity_coefficient != 0) {
    LocalPrimeDivisor L;
    L.prime = p;
    L.chart = Chart::Infinity;
    L.a_local = Poly::x();
    L.multiplicity = D.infinity_coefficient;
    L.precision = digits;
    L.term = "inf";
    L.id = "inf";
    out.push_back(std::move(L));
  }
  return out;
}

std::optional<Rational> norm_on_divisor(const Poly& g0, const Poly& g1, const LocalPrimeDivisor& Y) {
  if (Y.fibre) {
    if (!g1.is_zero()) throw ValidationError("norms over a fibre take functions of x alone");
    Rational r = resultant(Y.a_local, g0 % Y.a_local);
    if (r == 0) return std::nullopt;
    return r * r;
  }
  Rational r = resultant(Y.a_local, (g0 + Y.b_local * g1) % Y.a_local);
  if (r == 0) return std::nullopt;
  return r;
}

std::vector<IdealGenerator> ideal_generators(const LocalPrimeDivisor& X) {
  std::vector<IdealGenerator> gens{{X.a_local, Poly()}};
  if (X.fibre) return gens;
  // The y-part g1 of an ideal element ranges over J = {g : g b integral mod a}.
  // A Smith reduction of the multiplication-by-b matrix over Z_(p) gives a basis.
  const Integer& p = X.prime;
  int d = X.a_local.degree();
  QMatrix A = multiplication_matrix(X.b_local, X.a_local);
  QMatrix V(d, std::vector<Rational>(d));
  for (int i = 0; i < d; ++i) V[i][i] = 1;
  std::vector<std::optional<long>> s(d);
  for (int t = 0; t < d; ++t) {
    int pi = -1, pj = -1;
    long best = 0;
    for (int i = t; i < d; ++i)
      for (int j = t; j < d; ++j) {
        if (A[i][j] == 0) continue;
        long v = valuation_or_throw(A[i][j], p);
        if (pi < 0 || v < best) {
          pi = i;
          pj = j;
          best = v;
        }
      }
    if (pi < 0) break;
    std::swap(A[pi], A[t]);
    for (auto& row : A) std::swap(row[pj], row[t]);
    for (auto& row : V) std::swap(row[pj], row[t]);
    for (int r = t + 1; r < d; ++r) {
      if (A[r][t] == 0) continue;
      Rational q = A[r][t] / A[t][t];
      for (int c = t; c < d; ++c) A[r][c] -= q * A[t][c];
    }
    for (int c = t + 1; c < d; ++c) {
      if (A[t][c] == 0) continue;
      Rational q = A[t][c] / A[t][t];
      A[t][c] = 0;
      for (int r = 0; r < d; ++r) V[r][c] -= q * V[r][t];
    }
    s[t] = best;
  }
  for (int t = 0; t < d; ++t) {
    Rational scale = 1;
    if (s[t] && *s[t] < 0) scale = Rational(detail::ipow(p, static_cast<unsigned long>(-*s[t])));
    std::vector<Rational> col(d);
    for (int i = 0; i < d; ++i) col[i] = V[i][t] * scale;
    Poly g1(col);
    Poly g0 = -((g1 * X.b_local) % X.a_local);
    gens.push_back({g0, g1});
  }
  return gens;
}

Rational horizontal_pair(const LocalPrimeDivisor& X, const LocalPrimeDivisor& Y) {
  if (X.prime != Y.prime) throw ValidationError("local divisors live over different primes");
  if (X.fibre && Y.fibre) throw ValidationError("pairing two fibres is not supported");
  if (X.chart != Y.chart) return 0;
  // A fibre is cut out by a single function of x; use it from the fibre side.
  const LocalPrimeDivisor& G = Y.fibre ? Y : X;
  const LocalPrimeDivisor& N = Y.fibre ? X : Y;
  long cutoff = std::max(1L, std::min(X.precision, Y.precision) / 2);
  std::optional<long> best;
  bool truncated = false;
  for (const auto& g : ideal_generators(G)) {
    auto n = norm_on_divisor(g.g0, g.g1, N);
    if (!n) continue;
    long v = valuation_or_throw(*n, X.prime);
    if (v >= cutoff) {
      truncated = true;
      continue;
    }
    if (!best || v < *best) best = v;
  }
  if (!best) {
    if (truncated) throw PrecisionError("local divisors " + X.id + " and " + Y.id + " are not separated at " +
                                        std::to_string(cutoff * 2) + " p-adic digits");
    throw ValidationError("local divisors " + X.id + " and " + Y.id + " share a generic point");
  }
  if (*best > 0) {
    if (!X.regular || !Y.regular)
      throw ReductionDataRequired("at p = " + X.prime.get_str() + ", " + X.id + " and " + Y.id +
                                      " meet at a non-regular point of the plane model",
                                  X.prime.get_str());
    if (!X.certified || !Y.certified)
      throw PrecisionError("p-adic factor of " + (X.certified ? Y.id : X.id) + " is not certified irreducible");
  }
  return X.multiplicity * Y.multiplicity * *best;
}

void validate_reduction_data(const ReductionData& data) {
  size_t n = data.components.size();
  std::string at = "reduction data at p = " + data.prime.get_str() + ": ";
  if (data.prime < 2 || !is_probable_prime(data.prime)) throw ValidationError(at + "prime is not prime");
  if (n == 0) throw ValidationError(at + "no components");
  std::set<std::string> ids;
  for (const auto& c : data.components) {
    if (c.id.empty()) throw ValidationError(at + "empty component id");
    if (!ids.insert(c.id).second) throw ValidationError(at + "duplicate component id " + c.id);
    if (c.multiplicity < 1) throw ValidationError(at + "component " + c.id + " has nonpositive multiplicity");
  }
  if (!ids.count(data.infinity_component))
    throw ValidationError(at + "infinity_component '" + data.infinity_component + "' is not a component");
  for (const auto& [term, comp] : data.assignments)
    if (!ids.count(comp)) throw ValidationError(at + "assignment " + term + " -> unknown component " + comp);
  if (data.matrix.size() != n) throw ValidationError(at + "matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  for (const auto& row : data.matrix)
    if (row.size() != n) throw ValidationError(at + "matrix must be square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (data.matrix[i][j] != data.matrix[j][i]) throw ValidationError(at + "intersection matrix not symmetric");
  for (size_t i = 0; i < n; ++i) {
    long s = 0;
    for (size_t j = 0; j < n; ++j) s += data.matrix[i][j] * data.components[j].multiplicity;
    if (s != 0) throw ValidationError(at + "matrix times multiplicities is not zero (row " + std::to_string(i) + ")");
  }
  QMatrix M(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) M[i][j] = data.matrix[i][j];
  if (rank(M) != static_cast<int>(n) - 1) throw ValidationError(at + "matrix rank must be n - 1");
}

namespace {

size_t component_index(const ReductionData& data, const std::string& id) {
  for (size_t j = 0; j < data.components.size(); ++j)
    if (data.components[j].id == id) return j;
  throw ValidationError("unknown component " + id);
}

}  // namespace

std::vector<Rational> component_incidence(const std::vector<LocalPrimeDivisor>& pieces, const ReductionData& data) {
  size_t n = data.components.size();
  std::vector<Rational> out(n);
  for (const auto& L : pieces) {
    size_t j = 0;
    if (n > 1) {
      if (L.term == "inf") {
        j = component_index(data, data.infinity_component);
      } else {
        auto it = data.assignments.find(L.id);
        if (it == data.assignments.end()) it = data.assignments.find(L.term);
        if (it == data.assignments.end())
          throw ValidationError("reduction data at p = " + data.prime.get_str() + " has no component assignment for " +
                                L.id + " (term " + L.term + ")");
        j = component_index(data, it->second);
      }
    }
    out[j] += L.multiplicity * L.degree() / data.components[j].multiplicity;
  }
  return out;
}

Rational phi_correction(const ReductionData& data, const std::vector<Rational>& d_incidence,
                        const std::vector<Rational>& e_incidence) {
  validate_reduction_data(data);
  size_t n = data.components.size();
  if (d_incidence.size() != n || e_incidence.size() != n)
    throw ValidationError("incidence vectors must have one entry per component");
  if (n == 1) return 0;
  Rational kernel_dot;
  for (size_t j = 0; j < n; ++j) kernel_dot += d_incidence[j] * data.components[j].multiplicity;
  if (kernel_dot != 0) throw ValidationError("data-integrity error: incidence is not orthogonal to the fibre");
  size_t k = component_index(data, data.infinity_component);
  QMatrix A;
  std::vector<Rational> rhs;
  for (size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    std::vector<Rational> row;
    for (size_t j = 0; j < n; ++j)
      if (j != k) row.emplace_back(data.matrix[i][j]);
    A.push_back(std::move(row));
    rhs.push_back(-d_incidence[i]);
  }
  auto sol = solve(A, rhs);
  Rational out;
  for (size_t i = 0, s = 0; i < n; ++i) {
    if (i == k) continue;
    out += sol[s++] * e_incidence[i];
  }
  return out;
}

namespace {

LocalPairing evaluate_pairing(const FormalDivisor& D, const FormalDivisor& E, const HyperellipticCurve& C,
                              const Integer& p, const ReductionData* data, long digits) {
  auto LD = split_padic(D, C, p, digits, "D");
  auto LE = split_padic(E, C, p, digits, "E");
  if (!data)
    for (const auto& X : LD)
      if (!X.regular)
        throw ReductionDataRequired("at p = " + p.get_str() + ", " + X.id +
                                        " reduces to a non-regular point of the plane model; the fibral "
                                        "correction needs reduction data",
                                    p.get_str());
  LocalPairing out;
  out.prime = p;
  out.digits = digits;
  for (const auto& X : LD)
    for (const auto& Y : LE) out.horizontal += horizontal_pair(X, Y);
  if (data && data->components.size() > 1)
    out.fibral = phi_correction(*data, component_incidence(LD, *data), component_incidence(LE, *data));
  out.total = out.horizontal + out.fibral;
  return out;
}

}  // namespace

LocalPairing local_nonarch_pairing(const FormalDivisor& D, const FormalDivisor& E, const HyperellipticCurve& C,
                                   const Integer& p, const ReductionData* data, long digits) {
  if (p < 2 || !is_probable_prime(p)) throw ValidationError("p must be prime, got " + p.get_str());
  if (data) {
    validate_reduction_data(*data);
    if (data->prime != p)
      throw ValidationError("reduction data is for p = " + data->prime.get_str() + ", not " + p.get_str());
  }
  if (D.degree() != 0 || E.degree() != 0) throw ValidationError("local pairing needs divisors of degree zero");
  long N = digits;
  if (N <= 0) {
    auto v = valuation(C.discriminant, p);
    N = 20 * std::max(1L, v.value_or(1));
  }
  constexpr int kDoublings = 4;
  for (int attempt = 0; attempt <= kDoublings; ++attempt, N *= 2) {
    try {
      LocalPairing lo = evaluate_pairing(D, E, C, p, data, N);
      LocalPairing hi = evaluate_pairing(D, E, C, p, data, 2 * N);
      if (lo.total == hi.total && lo.horizontal == hi.horizontal) return lo;
    } catch (const PrecisionError&) {
      if (attempt == kDoublings) throw;
    }
  }
  throw PrecisionError("local pairing at p = " + p.get_str() + " did not stabilise up to " + std::to_string(N) +
                       " digits");
}

}  // namespace hyperheight
