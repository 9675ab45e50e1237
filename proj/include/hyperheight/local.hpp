#pragma once

#include "hyperheight/curve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperheight {

// Coordinates used for a local divisor: the affine chart (x, y) or the chart
// at infinity (u, v) = (1/x, y / x^(g+1)) with v^2 = u^(2g+2) f(1/u).
enum class Chart { Affine, Infinity };

// Prime horizontal divisor over Z_p: {a_local = 0, y = b_local} in its chart,
// or the whole fibre {a_local = 0} when fibre is set.
struct LocalPrimeDivisor {
  Integer prime;
  Chart chart = Chart::Affine;
  bool fibre = false;
  Poly a_local;  // monic, exact modulo p^precision
  Poly b_local;  // reduced modulo a_local; unused for fibres
  Rational multiplicity;
  long precision = 0;
  bool certified = true;
  int residue_degree = 1;
  int ramification = 1;
  bool regular = true;  // reduces to a regular point of the plane model
  std::string term;     // divisor term identifier, e.g. "D0" or "inf"
  std::string id;       // local piece identifier, e.g. "D0.1"

  int degree() const { return fibre ? 2 * a_local.degree() : a_local.degree(); }
};

// Irreducible factors mod p of the x-coordinates of the points where the
// plane model over Z_p fails to be regular.
std::vector<Poly> nonregular_reductions(const HyperellipticCurve& C, const Integer& p);

// Splits every term over Q_p. Terms are named prefix + index; the point at
// infinity, when present, becomes the piece "inf".
std::vector<LocalPrimeDivisor> split_padic(const FormalDivisor& D, const HyperellipticCurve& C, const Integer& p,
                                           long digits, const std::string& prefix = "D");

// Norm of g0 + y g1 over Y, i.e. Res(a_Y, g0 + b_Y g1). nullopt when the
// function vanishes on Y. On a fibre only g1 = 0 is accepted.
std::optional<Rational> norm_on_divisor(const Poly& g0, const Poly& g1, const LocalPrimeDivisor& Y);

// Generators g0 + y g1 of the ideal of the closure of X in its chart.
struct IdealGenerator {
  Poly g0, g1;
};
std::vector<IdealGenerator> ideal_generators(const LocalPrimeDivisor& X);

// mult(X) mult(Y) <X, Y>_p on the plane model. Throws ReductionDataRequired
// when the divisors meet at a non-regular point, PrecisionError when the
// working precision cannot separate the generators.
Rational horizontal_pair(const LocalPrimeDivisor& X, const LocalPrimeDivisor& Y);

struct FibreComponent {
  std::string id;
  long multiplicity = 1;
};

// Special fibre of a regular model at one prime, supplied from outside.
struct ReductionData {
  Integer prime;
  std::vector<FibreComponent> components;
  std::vector<std::vector<long>> matrix;  // intersection matrix
  std::string infinity_component;
  std::map<std::string, std::string> assignments;  // term or piece id -> component id
};

void validate_reduction_data(const ReductionData& data);

// Entry j: intersection of the closure of the divisor with component j.
std::vector<Rational> component_incidence(const std::vector<LocalPrimeDivisor>& pieces, const ReductionData& data);
// Solves M phi = -d with phi vanishing on the component at infinity, returns phi . e.
Rational phi_correction(const ReductionData& data, const std::vector<Rational>& d_incidence,
                        const std::vector<Rational>& e_incidence);

struct LocalPairing {
  Integer prime;
  Rational horizontal;
  Rational fibral;
  Rational total;
  long digits = 0;
};

// <D + Phi(D), E>_p in units of log p. digits = 0 picks the starting precision
// automatically; the result is accepted once two precisions agree.
LocalPairing local_nonarch_pairing(const FormalDivisor& D, const FormalDivisor& E, const HyperellipticCurve& C,
                                   const Integer& p, const ReductionData* data = nullptr, long digits = 0);

}  // namespace hyperheight
