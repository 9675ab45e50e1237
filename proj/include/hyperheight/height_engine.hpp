#pragma once

#include "hyperheight/curve.hpp"
#include "hyperheight/local.hpp"
#include "hyperheight/places.hpp"
#include "hyperheight/riemann_theta.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hyperheight {

struct HeightOptions {
  Precision prec{40, 10};
  std::map<Integer, ReductionData> reduction_data;
  std::uint64_t seed = 0;
  std::chrono::milliseconds factor_budget = std::chrono::seconds(60);
  // Largest n tried for n D when a prime needs reduction data that was not supplied.
  int max_fallback_multiple = 12;
  // Reused across calls on the same curve and precision when set.
  std::shared_ptr<const PeriodData> periods;
};

struct LocalTerm {
  Integer prime;
  Rational horizontal;
  Rational fibral;
  Real weight;  // log p
  std::vector<PlaceReason> reasons;
  long digits = 0;  // p-adic precision that was accepted
};

// Good primes left unfactored inside an intersection index: they contribute
// weight * log cofactor in one piece.
struct ResidualTerm {
  std::string d_term;
  std::string e_term;
  Rational weight;  // product of the two term coefficients
  Integer cofactor;
  Real value;
};

struct HeightBreakdown {
  std::string curve_id;
  std::string divisor_description;
  std::string evaluated_divisor;  // the multiple actually paired
  std::string e_description;
  Rational lambda;
  int multiplier = 1;  // total_height = raw / multiplier^2
  bool torsion = false;
  std::vector<LocalTerm> local_terms;
  std::vector<ResidualTerm> residual_terms;
  Real nonarchimedean_sum;  // local terms plus residual terms
  Real archimedean_term;
  int archimedean_attempts = 0;
  Real total_height;
  Precision precision_used;
};

// Period data for C at the options' precision, reusing options.periods when it matches.
std::shared_ptr<const PeriodData> periods_for(const HyperellipticCurve& C, const HeightOptions& options);

HeightBreakdown neron_tate_height(const HyperellipticCurve& C, const MumfordDivisor& D,
                                  const HeightOptions& options = {});

// Polarization 1/2 (h(D1 + D2) - h(D1) - h(D2)).
Real height_pairing(const HyperellipticCurve& C, const MumfordDivisor& D1, const MumfordDivisor& D2,
                    const HeightOptions& options = {});

// |2 h(D) + 2 h(E) - h(D + E) - h(D - E)|.
Real parallelogram_residual(const HyperellipticCurve& C, const MumfordDivisor& D, const MumfordDivisor& E,
                            const HeightOptions& options = {});

// Determinant of the Gram matrix of height pairings.
Real regulator(const HyperellipticCurve& C, const std::vector<MumfordDivisor>& points,
               const HeightOptions& options = {});

}  // namespace hyperheight
