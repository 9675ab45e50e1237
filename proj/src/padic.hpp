#pragma once

#include "zpoly.hpp"

namespace hyperheight::detail {

// Lifts a monic factor g0 of P mod p to a factor of P mod p^prec, given that
// g0 is coprime to the cofactor mod p.
ZPoly lift_monic_factor(const ZPoly& P, const ZPoly& g0, const Integer& p, long prec);

struct LocalFactor {
  ZPoly poly;        // monic; in x for finite roots, in u = 1/x for roots of negative valuation
  long precision;    // poly is exact modulo p^precision
  bool certified;    // irreducibility proven
  int residue_degree;
  int ramification;  // 0 when unknown
  bool at_infinity;
};

// Splits a squarefree rational polynomial over Q_p. Each factor carries its
// own chart: roots of nonnegative valuation use x, the others u = 1/x.
std::vector<LocalFactor> padic_local_factors(const Poly& f, const Integer& p, long digits);

}  // namespace hyperheight::detail
