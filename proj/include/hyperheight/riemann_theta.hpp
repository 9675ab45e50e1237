#pragma once

#include "hyperheight/curve.hpp"
#include "hyperheight/errors.hpp"
#include "hyperheight/numeric.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hyperheight {

// A theta value too close to zero for the requested precision; callers
// resample their auxiliary points.
class ThetaNearZero : public NumericalDegeneracy {
 public:
  using NumericalDegeneracy::NumericalDegeneracy;
};

struct CurvePoint {
  bool at_infinity = false;
  Complex x, y;

  static CurvePoint infinity() { return {true, {}, {}}; }
};

// Everything needed to evaluate theta(z; Omega) to a fixed precision.
struct ThetaContext {
  int genus = 0;
  Precision prec;
  CMatrix omega;
  RMatrix im_omega, im_omega_inv;
  RMatrix cholesky;  // upper T with Im Omega = T^T T
  Real shortest;     // shortest vector of sqrt(pi) T Z^g
  Real radius;       // ellipsoid radius in the same metric
};

ThetaContext make_theta_context(const CMatrix& omega, const Precision& prec);

// theta(z) = scaled * exp(log_scale) with log_scale = pi y^T (Im Omega)^-1 y.
struct ThetaValue {
  Complex scaled;
  Real log_scale;

  Real log_abs() const;
  Complex value() const;
};

ThetaValue theta_scaled(const CVector& z, const ThetaContext& ctx);
Complex theta(const CVector& z, const ThetaContext& ctx);
Complex theta(const CVector& z, const CMatrix& omega, const Precision& prec);

struct PeriodData {
  int genus = 0;
  Precision prec;
  Poly f;
  std::vector<Complex> branch_points;  // roots of f sorted by (Re, Im); infinity is implicit
  std::vector<std::string> homology_paths;
  CMatrix a_periods;             // [j][i] = integral of x^j dx / y over A_i
  CMatrix b_periods;             // [j][i] = integral of x^j dx / y over B_i
  CMatrix normalization_matrix;  // omega_i = sum_j N[i][j] x^j dx / y
  CMatrix period_matrix;         // Omega[i][j] = integral of omega_j over B_i
  CVector riemann_constant;
  ThetaContext theta;
  int quadrature_nodes = 0;
  Real symmetry_defect;  // max |Omega_ij - Omega_ji|
  Real min_eigen_bound;  // smallest Cholesky pivot squared, a positive-definiteness margin
};

PeriodData homology_and_periods(const HyperellipticCurve& C, const Precision& prec);

// Abel-Jacobi image with base point infinity, not reduced modulo the lattice.
CVector abel_jacobi(const CurvePoint& p, const PeriodData& data);

// Sum over eval points of weight * g_{D1 - D0}(p); D1, D0 given by their
// Abel-Jacobi images. Throws ThetaNearZero.
Real green_pairing(const CVector& alpha_d1, const CVector& alpha_d0,
                   const std::vector<std::pair<CVector, Real>>& evals, const PeriodData& data);
Real green_pairing(const std::vector<CurvePoint>& d1, const std::vector<CurvePoint>& d0,
                   const std::vector<std::pair<CurvePoint, Rational>>& evals, const PeriodData& data);

struct ArchimedeanResult {
  Real value;         // -(1/2) g_D(E)
  Real green;         // g_D(E)
  int attempts = 1;   // auxiliary resamplings used
};

// Archimedean Neron pairing of two degree-zero divisors with disjoint support.
ArchimedeanResult archimedean_pairing(const FormalDivisor& D, const FormalDivisor& E, const PeriodData& data,
                                      std::uint64_t seed = 1);

}  // namespace hyperheight
