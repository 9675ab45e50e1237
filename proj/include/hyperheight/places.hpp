#pragma once

#include "hyperheight/curve.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace hyperheight {

enum class PlaceReason { BadReduction, SupportCollision, Denominator };

std::string reason_name(PlaceReason r);  // BAD_REDUCTION, SUPPORT_COLLISION, DENOMINATOR

struct PlaceReport {
  Integer prime;
  std::vector<PlaceReason> reasons;  // nonempty, sorted, no repeats
};

// Finite set of primes outside which the non-Archimedean pairing of D and E
// vanishes, sorted by prime. Throws FactorizationBudgetExceeded when an
// integer invariant cannot be factored within the budget.
std::vector<PlaceReport> candidate_places(const HyperellipticCurve& C, const FormalDivisor& D, const FormalDivisor& E,
                                          std::chrono::milliseconds budget = std::chrono::seconds(60));
std::vector<PlaceReport> candidate_places(const HyperellipticCurve& C, const MumfordDivisor& D, const FormalDivisor& E,
                                          std::chrono::milliseconds budget = std::chrono::seconds(60));

// Integer N with v_p(N) = i_p(closure X, closure Y) for every odd prime p of
// good reduction that divides no denominator of X or Y. Throws
// ValidationError when the supports meet.
Integer intersection_index(const DivisorTerm& X, const DivisorTerm& Y);

// Part of the intersection index of D.terms[d_term] and E.terms[e_term] left
// after removing every prime in PlacePlan::places; all its prime factors are
// good primes that were not factored out.
struct ResidualIndex {
  size_t d_term = 0;
  size_t e_term = 0;
  Integer cofactor;
};

struct PlacePlan {
  std::vector<PlaceReport> places;
  std::vector<ResidualIndex> residuals;
};

// Like candidate_places, but support collisions come from the intersection
// indices and are factored with a fixed effort: whatever is left unfactored
// is returned as residual cofactors instead of raising
// FactorizationBudgetExceeded. Bad and denominator primes are still factored
// completely within the budget.
PlacePlan plan_places(const HyperellipticCurve& C, const FormalDivisor& D, const FormalDivisor& E,
                      std::chrono::milliseconds budget = std::chrono::seconds(60),
                      unsigned long rho_steps = 1UL << 18);

}  // namespace hyperheight
