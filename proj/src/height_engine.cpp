#include "hyperheight/height_engine.hpp"

#include <future>
#include <optional>

namespace hyperheight {

namespace {

namespace mp = boost::multiprecision;

// Runs f and prefixes any library error with the name of the failing step.
template <class F>
auto step(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ReductionDataRequired& e) {
    throw ReductionDataRequired(name + ": " + e.what(), e.prime());
  } catch (const FactorizationBudgetExceeded& e) {
    throw FactorizationBudgetExceeded(name + ": " + e.what(), e.partial(), e.cofactor());
  } catch (const ValidationError& e) {
    throw ValidationError(name + ": " + e.what());
  } catch (const PrecisionError& e) {
    throw PrecisionError(name + ": " + e.what());
  } catch (const NumericalDegeneracy& e) {
    throw NumericalDegeneracy(name + ": " + e.what());
  }
}

struct LocalStage {
  Rational lambda;
  FormalDivisor E;
  std::vector<LocalTerm> terms;
  std::vector<ResidualTerm> residuals;
};

// Local pairings at the given primes, run concurrently (exact arithmetic only).
// Collects ReductionDataRequired after the other errors.
std::vector<LocalPairing> run_local(const HyperellipticCurve& C, const FormalDivisor& F, const FormalDivisor& E,
                                    const std::vector<Integer>& primes, const HeightOptions& opt) {
  std::vector<std::future<LocalPairing>> jobs;
  for (const auto& p : primes) {
    auto it = opt.reduction_data.find(p);
    const ReductionData* data = it == opt.reduction_data.end() ? nullptr : &it->second;
    jobs.push_back(std::async(std::launch::async, [&C, &F, &E, p, data] {
      return local_nonarch_pairing(F, E, C, p, data);
    }));
  }
  std::vector<LocalPairing> out;
  std::optional<ReductionDataRequired> missing;
  std::exception_ptr other;
  for (auto& job : jobs) {
    try {
      out.push_back(job.get());
    } catch (const ReductionDataRequired& e) {
      if (!missing) missing.emplace(e);
    } catch (...) {
      if (!other) other = std::current_exception();
    }
  }
  if (other) {
    try {
      std::rethrow_exception(other);
    } catch (...) {
      step("local_nonarch_pairing", [] { throw; });
    }
  }
  if (missing) throw ReductionDataRequired(std::string("local_nonarch_pairing: ") + missing->what(), missing->prime());
  return out;
}

// Local pairings of F against its E for one choice of lambda. The bad primes
// go first so that a missing regular model is detected before any expensive
// factorization.
LocalStage local_stage(const HyperellipticCurve& C, const MumfordDivisor& Dn, const FormalDivisor& F,
                       const std::vector<Integer>& bad, std::uint64_t lambda_seed, const HeightOptions& opt) {
  LocalStage st;
  st.lambda = step("choose_lambda", [&] { return choose_lambda(Dn, C, lambda_seed); });
  st.E = step("construct_E", [&] { return construct_E(Dn, st.lambda, C); });
  std::map<Integer, LocalPairing> done;
  for (auto& lp : run_local(C, F, st.E, bad, opt)) done.emplace(lp.prime, std::move(lp));
  auto plan = step("candidate_places", [&] { return plan_places(C, F, st.E, opt.factor_budget); });
  std::vector<Integer> rest;
  for (const auto& pr : plan.places)
    if (!done.count(pr.prime)) rest.push_back(pr.prime);
  for (auto& lp : run_local(C, F, st.E, rest, opt)) done.emplace(lp.prime, std::move(lp));
  for (const auto& pr : plan.places) {
    const LocalPairing& lp = done.at(pr.prime);
    LocalTerm t;
    t.prime = lp.prime;
    t.horizontal = lp.horizontal;
    t.fibral = lp.fibral;
    t.reasons = pr.reasons;
    t.digits = lp.digits;
    st.terms.push_back(std::move(t));
  }
  for (const auto& r : plan.residuals) {
    ResidualTerm t;
    t.d_term = "D" + std::to_string(r.d_term);
    t.e_term = "E" + std::to_string(r.e_term);
    t.weight = F.terms[r.d_term].coefficient * st.E.terms[r.e_term].coefficient;
    t.cofactor = r.cofactor;
    st.residuals.push_back(std::move(t));
  }
  return st;
}

HeightBreakdown height_or_zero(const HyperellipticCurve& C, const MumfordDivisor& D, const HeightOptions& opt) {
  if (D.is_identity()) {
    HeightBreakdown b;
    b.curve_id = C.id();
    b.divisor_description = D.to_string();
    b.torsion = true;
    b.precision_used = opt.prec;
    PrecisionScope s(opt.prec);
    b.total_height = b.nonarchimedean_sum = b.archimedean_term = 0;
    return b;
  }
  return neron_tate_height(C, D, opt);
}

}  // namespace

std::shared_ptr<const PeriodData> periods_for(const HyperellipticCurve& C, const HeightOptions& options) {
  const auto& p = options.periods;
  if (p && p->f == C.f && p->prec.digits == options.prec.digits && p->prec.guard == options.prec.guard) return p;
  return step("homology_and_periods",
              [&] { return std::make_shared<const PeriodData>(homology_and_periods(C, options.prec)); });
}

HeightBreakdown neron_tate_height(const HyperellipticCurve& C, const MumfordDivisor& D, const HeightOptions& opt) {
  step("input", [&] {
    opt.prec.validate();
    validate_divisor(D, C);
    if (D.is_identity()) throw ValidationError("the identity divisor is not a valid height input");
  });
  HeightBreakdown b;
  b.curve_id = C.id();
  b.divisor_description = D.to_string();
  b.precision_used = opt.prec;

  if (auto order = torsion_order(D, C)) {
    PrecisionScope s(opt.prec);
    b.torsion = true;
    b.multiplier = *order;
    b.evaluated_divisor = MumfordDivisor::identity().to_string();
    b.total_height = b.nonarchimedean_sum = b.archimedean_term = 0;
    return b;
  }

  auto wf = step("ensure_weierstrass_free", [&] { return ensure_weierstrass_free(D, C); });
  std::vector<Integer> bad = {Integer(2)};
  step("candidate_places", [&] {
    if (abs(C.discriminant) > 1)
      for (const auto& p : prime_divisors(C.discriminant, opt.factor_budget))
        if (p != 2) bad.push_back(p);
  });
  std::optional<ReductionDataRequired> missing;
  std::optional<FactorizationBudgetExceeded> budget;
  std::optional<ValidationError> mismatch;
  for (int n = 1; n <= opt.max_fallback_multiple; ++n) {
    MumfordDivisor Dn = n == 1 ? wf.divisor : multiply(wf.divisor, n, C);
    if (Dn.is_identity() || has_weierstrass_support(Dn, C)) continue;
    FormalDivisor F = to_formal(Dn);
    for (std::uint64_t k = 0; k < 2; ++k) {
      bool first = n == 1 && k == 0;
      std::optional<LocalStage> st;
      try {
        st = local_stage(C, Dn, F, bad, opt.seed + k, opt);
      } catch (const ReductionDataRequired& e) {
        if (!missing) missing.emplace(e);
        continue;
      } catch (const FactorizationBudgetExceeded& e) {
        // Larger multiples have larger denominators; only retry past a missing model.
        if (!missing) throw;
        if (!budget) budget.emplace(e);
        continue;
      } catch (const ValidationError& e) {
        // Supplied reduction data names the terms of D; other multiples may not match it.
        if (first || opt.reduction_data.empty()) throw;
        if (!mismatch) mismatch.emplace(e);
        continue;
      }
      auto periods = periods_for(C, opt);
      PrecisionScope s(opt.prec);
      auto arch = step("archimedean_pairing", [&] { return archimedean_pairing(F, st->E, *periods, opt.seed + 1); });
      b.multiplier = wf.multiplier * n;
      b.evaluated_divisor = Dn.to_string();
      b.lambda = st->lambda;
      b.e_description = st->E.to_string();
      b.nonarchimedean_sum = 0;
      for (auto& t : st->terms) {
        t.weight = mp::log(Real(t.prime.get_str()));
        b.nonarchimedean_sum += t.weight * to_real(t.horizontal + t.fibral);
      }
      for (auto& t : st->residuals) {
        t.value = to_real(t.weight) * mp::log(Real(t.cofactor.get_str()));
        b.nonarchimedean_sum += t.value;
      }
      b.local_terms = std::move(st->terms);
      b.residual_terms = std::move(st->residuals);
      b.archimedean_term = arch.value;
      b.archimedean_attempts = arch.attempts;
      b.total_height = (b.nonarchimedean_sum + b.archimedean_term) / (b.multiplier * b.multiplier);
      return b;
    }
  }
  if (budget) throw *budget;
  if (missing)
    throw ReductionDataRequired(std::string(missing->what()) + " (no multiple up to " +
                                    std::to_string(opt.max_fallback_multiple) + " avoids it)",
                                missing->prime());
  if (mismatch) throw *mismatch;
  throw ValidationError("ensure_weierstrass_free: no usable multiple of the divisor");
}

Real height_pairing(const HyperellipticCurve& C, const MumfordDivisor& D1, const MumfordDivisor& D2,
                    const HeightOptions& options) {
  if (D1.is_identity() || D2.is_identity()) throw ValidationError("height_pairing: identity divisor");
  HeightOptions opt = options;
  opt.periods = periods_for(C, options);
  Real h1 = neron_tate_height(C, D1, opt).total_height;
  Real h2 = neron_tate_height(C, D2, opt).total_height;
  Real h12 = height_or_zero(C, cantor_add(D1, D2, C), opt).total_height;
  PrecisionScope s(opt.prec);
  return (h12 - h1 - h2) / 2;
}

Real parallelogram_residual(const HyperellipticCurve& C, const MumfordDivisor& D, const MumfordDivisor& E,
                            const HeightOptions& options) {
  if (D.is_identity() || E.is_identity()) throw ValidationError("parallelogram_residual: identity divisor");
  HeightOptions opt = options;
  opt.periods = periods_for(C, options);
  Real hD = neron_tate_height(C, D, opt).total_height;
  Real hE = neron_tate_height(C, E, opt).total_height;
  Real hs = height_or_zero(C, cantor_add(D, E, C), opt).total_height;
  Real hd = height_or_zero(C, cantor_add(D, involution(E), C), opt).total_height;
  PrecisionScope s(opt.prec);
  return mp::abs(2 * hD + 2 * hE - hs - hd);
}

Real regulator(const HyperellipticCurve& C, const std::vector<MumfordDivisor>& points, const HeightOptions& options) {
  if (points.empty()) throw ValidationError("regulator: no points given");
  for (const auto& P : points)
    if (P.is_identity()) throw ValidationError("regulator: identity divisor");
  HeightOptions opt = options;
  opt.periods = periods_for(C, options);
  size_t n = points.size();
  std::vector<Real> h;
  for (const auto& P : points) h.push_back(neron_tate_height(C, P, opt).total_height);
  PrecisionScope s(opt.prec);
  RMatrix G(n, RVector(n, Real(0)));
  for (size_t i = 0; i < n; ++i) {
    G[i][i] = h[i];
    for (size_t j = i + 1; j < n; ++j) {
      Real hij = height_or_zero(C, cantor_add(points[i], points[j], C), opt).total_height;
      G[i][j] = G[j][i] = (hij - h[i] - h[j]) / 2;
    }
  }
  Real det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t i = c + 1; i < n; ++i)
      if (mp::abs(G[i][c]) > mp::abs(G[piv][c])) piv = i;
    if (G[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(G[piv], G[c]);
      det = -det;
    }
    det *= G[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      Real q = G[i][c] / G[c][c];
      for (size_t j = c; j < n; ++j) G[i][j] -= q * G[c][j];
    }
  }
  return det;
}

}  // namespace hyperheight
