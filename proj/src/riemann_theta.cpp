#include "hyperheight/riemann_theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>

namespace hyperheight {

namespace {

namespace mp = boost::multiprecision;

Real ten_pow(int e) { return mp::pow(Real(10), e); }

// log of the upper incomplete gamma function for x > a + 1 (continued fraction).
double log_upper_gamma(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < 1e-15) break;
  }
  return -x + a * std::log(x) + std::log(h);
}

std::vector<std::vector<double>> to_double(const RMatrix& A) {
  std::vector<std::vector<double>> r(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (const auto& v : A[i]) r[i].push_back(static_cast<double>(v));
  return r;
}

// Calls visit(n) for every integer vector with ||T (n + c)||^2 <= bound,
// where T is upper triangular. The innermost coordinate is index 0 and is
// reported as a contiguous range [lo, hi] through visit_row(n, lo, hi).
void enumerate_ellipsoid(const std::vector<std::vector<double>>& T, const std::vector<double>& c, double bound,
                         const std::function<void(std::vector<long>&, long, long)>& visit_row) {
  int g = static_cast<int>(T.size());
  std::vector<long> n(g, 0);
  std::function<void(int, double)> level = [&](int i, double used) {
    double s = 0;
    for (int j = i + 1; j < g; ++j) s += T[i][j] * (n[j] + c[j]);
    double rem = bound - used;
    if (rem < 0) return;
    double r = std::sqrt(rem);
    // T_ii (n_i + c_i) + s in [-r, r]
    double lo = (-r - s) / T[i][i] - c[i], hi = (r - s) / T[i][i] - c[i];
    long nlo = static_cast<long>(std::ceil(lo - 1e-9)), nhi = static_cast<long>(std::floor(hi + 1e-9));
    if (nlo > nhi) return;
    if (i == 0) {
      visit_row(n, nlo, nhi);
      return;
    }
    for (long k = nlo; k <= nhi; ++k) {
      n[i] = k;
      double t = T[i][i] * (k + c[i]) + s;
      level(i - 1, used + t * t);
    }
    n[i] = 0;
  };
  level(g - 1, 0.0);
}

double shortest_vector(const std::vector<std::vector<double>>& T) {
  int g = static_cast<int>(T.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g; ++i) {
    double s = 0;
    for (int k = 0; k <= i; ++k) s += T[k][i] * T[k][i];
    best = std::min(best, s);
  }
  std::vector<double> zero(g, 0.0);
  enumerate_ellipsoid(T, zero, best * (1 + 1e-9), [&](std::vector<long>& n, long lo, long hi) {
    for (long k = lo; k <= hi; ++k) {
      n[0] = k;
      bool nonzero = false;
      for (long v : n) nonzero |= v != 0;
      if (!nonzero) continue;
      double s = 0;
      for (int i = 0; i < g; ++i) {
        double t = 0;
        for (int j = i; j < g; ++j) t += T[i][j] * n[j];
        s += t * t;
      }
      best = std::min(best, s);
    }
    n[0] = 0;
  });
  return std::sqrt(best);
}

}  // namespace

ThetaContext make_theta_context(const CMatrix& omega, const Precision& prec) {
  prec.validate();
  PrecisionScope scope(prec);
  ThetaContext ctx;
  ctx.genus = static_cast<int>(omega.size());
  ctx.prec = prec;
  ctx.omega = omega;
  ctx.im_omega = imag_part(omega);
  ctx.cholesky = cholesky_upper(ctx.im_omega);
  ctx.im_omega_inv = inverse(ctx.im_omega);
  auto T = to_double(ctx.cholesky);
  double g = ctx.genus;
  double rho = std::sqrt(M_PI) * shortest_vector(T);
  ctx.shortest = rho;
  // Tail bound: (g/2) (2/rho)^g Gamma(g/2, (R - rho/2)^2) < 10^-(digits + guard).
  double target = -prec.working_digits() * std::log(10.0);
  double R = rho / 2 + std::sqrt(g / 2) + 1;
  for (;; R += 0.125) {
    double x = (R - rho / 2) * (R - rho / 2);
    if (x <= g / 2 + 1) continue;
    double lb = std::log(g / 2) + g * std::log(2 / rho) + log_upper_gamma(g / 2, x);
    if (lb < target) break;
  }
  ctx.radius = R;
  return ctx;
}

Real ThetaValue::log_abs() const { return mp::log(abs(scaled)) + log_scale; }

Complex ThetaValue::value() const { return mp::exp(log_scale) * scaled; }

ThetaValue theta_scaled(const CVector& z, const ThetaContext& ctx) {
  PrecisionScope scope(ctx.prec);
  int g = ctx.genus;
  if (static_cast<int>(z.size()) != g) throw ValidationError("theta argument has the wrong dimension");
  RVector y = imag_part(z);
  RVector c = multiply(ctx.im_omega_inv, y);
  ThetaValue out;
  out.log_scale = pi() * dot(y, c);
  auto T = to_double(ctx.cholesky);
  std::vector<double> cd;
  for (const auto& v : c) cd.push_back(static_cast<double>(v));
  double R = static_cast<double>(ctx.radius);
  double bound = R * R / M_PI;
  Complex I(Real(0), Real(1));
  Complex two_pi_i = Real(2) * pi() * I;
  Complex pi_i = pi() * I;
  Complex q2 = exp(two_pi_i * ctx.omega[0][0]);
  Complex sum;
  enumerate_ellipsoid(T, cd, bound, [&](std::vector<long>& n, long lo, long hi) {
    n[0] = lo;
    Complex quad, lin;
    for (int i = 0; i < g; ++i) {
      if (n[i] == 0) continue;
      lin += Real(n[i]) * z[i];
      for (int j = 0; j < g; ++j)
        if (n[j] != 0) quad += Real(n[i] * n[j]) * ctx.omega[i][j];
    }
    Complex term = exp(pi_i * quad + two_pi_i * lin - Complex(out.log_scale));
    Complex cross = Real(2 * lo + 1) * ctx.omega[0][0];
    for (int j = 1; j < g; ++j)
      if (n[j] != 0) cross += Real(2 * n[j]) * ctx.omega[0][j];
    Complex ratio = exp(pi_i * cross + two_pi_i * z[0]);
    for (long k = lo; k <= hi; ++k) {
      sum += term;
      term *= ratio;
      ratio *= q2;
    }
    n[0] = 0;
  });
  out.scaled = sum;
  return out;
}

Complex theta(const CVector& z, const ThetaContext& ctx) { return theta_scaled(z, ctx).value(); }

Complex theta(const CVector& z, const CMatrix& omega, const Precision& prec) {
  return theta(z, make_theta_context(omega, prec));
}

namespace {

bool less_branch(const Complex& a, const Complex& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

// Gauss-Legendre nodes and weights on [-1, 1], cached per order and precision.
const std::pair<RVector, RVector>& legendre_rule(int n) {
  static std::map<std::pair<int, unsigned>, std::pair<RVector, RVector>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, Real::default_precision());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  RVector x(n), w(n);
  Real eps = ten_pow(-static_cast<int>(Real::default_precision()) + 2);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real t = mp::cos(pi() * (i + Real("0.75")) / (n + Real("0.5")));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      Real step = p1 / dp;
      t -= step;
      if (mp::abs(step) < eps) break;
    }
    Real p0 = 1, p1 = t;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2 / ((1 - t * t) * dp * dp);
  }
  return cache.emplace(key, std::make_pair(x, w)).first->second;
}

using VecFn = std::function<CVector(const Real&)>;

CVector gl(const VecFn& F, const Real& a, const Real& b, int n, size_t dim) {
  const auto& [x, w] = legendre_rule(n);
  Real h = (b - a) / 2, m = (a + b) / 2;
  CVector acc(dim);
  for (int i = 0; i < n; ++i) {
    CVector v = F(m + h * x[i]);
    for (size_t j = 0; j < dim; ++j) acc[j] += w[i] * v[j];
  }
  for (auto& v : acc) v = h * v;
  return acc;
}

Real max_diff(const CVector& a, const CVector& b) {
  Real m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, Real(abs(a[i] - b[i])));
  return m;
}

CVector adaptive(const VecFn& F, const Real& a, const Real& b, const CVector& whole, const Real& tol, int n,
                 size_t dim, int depth) {
  Real m = (a + b) / 2;
  CVector left = gl(F, a, m, n, dim), right = gl(F, m, b, n, dim);
  CVector both(dim);
  for (size_t j = 0; j < dim; ++j) both[j] = left[j] + right[j];
  if (max_diff(both, whole) < tol) return both;
  if (depth > 40) throw PrecisionError("Abel-Jacobi quadrature did not converge");
  CVector l = adaptive(F, a, m, left, tol / 2, n, dim, depth + 1);
  CVector r = adaptive(F, m, b, right, tol / 2, n, dim, depth + 1);
  for (size_t j = 0; j < dim; ++j) l[j] += r[j];
  return l;
}

struct Segment {
  Complex mid, h, c;
  std::vector<Complex> others;
  Complex S(const Real& t) const {
    Complex x = mid + t * h;
    Complex s(1);
    for (const auto& o : others) s *= sqrt((x - o) / (mid - o));
    return s;
  }
};

CVector segment_integral(const Segment& seg, int n, int g) {
  CVector I(g);
  for (int i = 1; i <= n; ++i) {
    Real t = mp::cos((2 * i - 1) * pi() / (2 * n));
    Complex x = seg.mid + t * seg.h;
    Complex inv = Complex(1) / seg.S(t);
    Complex xp(1);
    for (int j = 0; j < g; ++j) {
      I[j] += xp * inv;
      xp *= x;
    }
  }
  Complex scale = (pi() / n) * (seg.h / seg.c);
  for (auto& v : I) v *= scale;
  return I;
}

CurvePoint random_point(const Poly& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> re(-24, 24), im(2, 12);
  Complex x(Real(re(rng)) / 16, Real(im(rng)) / 16);
  return {false, x, sqrt(horner(f, x))};
}

CVector add(CVector a, const CVector& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

CVector sub(CVector a, const CVector& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Real theta_threshold(const Precision& p) { return ten_pow(-p.digits / 2); }

}  // namespace

PeriodData homology_and_periods(const HyperellipticCurve& C, const Precision& prec) {
  prec.validate();
  PrecisionScope scope(prec);
  int g = C.genus;
  PeriodData d;
  d.genus = g;
  d.prec = prec;
  d.f = C.f;
  auto e = polynomial_roots(C.f);
  std::sort(e.begin(), e.end(), less_branch);
  d.branch_points = e;
  Real sep = ten_pow(-prec.digits / 2);
  for (size_t i = 0; i < e.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (abs(e[i] - e[j]) < sep) throw NumericalDegeneracy("ill-conditioned curve: two branch points closer than 1e-" +
                                                            std::to_string(prec.digits / 2));

  std::vector<Segment> segs(2 * g);
  for (int k = 0; k < 2 * g; ++k) {
    Segment& s = segs[k];
    s.mid = (e[k] + e[k + 1]) / Complex(2);
    s.h = (e[k + 1] - e[k]) / Complex(2);
    Complex prod(1);
    for (int m = 0; m < 2 * g + 1; ++m)
      if (m != k && m != k + 1) {
        s.others.push_back(e[m]);
        prod *= s.mid - e[m];
      }
    s.c = Complex(Real(0), Real(1)) * s.h * sqrt(prod);
  }
  Real tol = ten_pow(-(prec.digits + prec.guard / 2));
  std::vector<CVector> I(2 * g);
  int nodes = 32;
  for (int k = 0; k < 2 * g; ++k) {
    int n = 32;
    CVector prev = segment_integral(segs[k], n, g);
    for (;;) {
      n *= 2;
      if (n > (1 << 16)) throw NumericalDegeneracy("ill-conditioned curve: period quadrature did not converge");
      CVector cur = segment_integral(segs[k], n, g);
      Real scale = 1;
      for (const auto& v : cur) scale = std::max(scale, Real(abs(v)));
      bool ok = max_diff(cur, prev) < tol * scale;
      prev = std::move(cur);
      if (ok) break;
    }
    I[k] = prev;
    nodes = std::max(nodes, n);
  }
  d.quadrature_nodes = nodes;

  std::vector<int> sigma(2 * g, 1);
  for (int k = 1; k < 2 * g; ++k) {
    Complex w = -(segs[k].c * segs[k].S(-1)) / (Real(sigma[k - 1]) * segs[k - 1].c * segs[k - 1].S(1));
    sigma[k] = w.im > 0 ? 1 : -1;
  }
  std::vector<CVector> per(2 * g, CVector(g));
  for (int k = 0; k < 2 * g; ++k)
    for (int j = 0; j < g; ++j) per[k][j] = Real(2 * sigma[k]) * I[k][j];

  d.a_periods.assign(g, CVector(g));
  d.b_periods.assign(g, CVector(g));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      d.a_periods[j][i] = per[2 * i][j];
      for (int k = i; k < g; ++k) d.b_periods[j][i] += per[2 * k + 1][j];
    }
  for (int i = 0; i < g; ++i) {
    std::string a = "A" + std::to_string(i + 1) + ": loop around e" + std::to_string(2 * i + 1) + ", e" +
                    std::to_string(2 * i + 2);
    std::string b = "B" + std::to_string(i + 1) + ":";
    for (int k = i; k < g; ++k)
      b += " loop around e" + std::to_string(2 * k + 2) + ", e" + std::to_string(2 * k + 3) + (k + 1 < g ? " +" : "");
    d.homology_paths.push_back(a);
    d.homology_paths.push_back(b);
  }
  d.normalization_matrix = inverse(d.a_periods);
  CMatrix omega = transpose(multiply(d.normalization_matrix, d.b_periods));
  d.symmetry_defect = 0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) d.symmetry_defect = std::max(d.symmetry_defect, Real(abs(omega[i][j] - omega[j][i])));
  if (d.symmetry_defect > ten_pow(-(prec.digits - 5)))
    throw NumericalDegeneracy("period matrix is not symmetric (defect " + to_string(d.symmetry_defect, 5) + ")");
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < i; ++j) omega[i][j] = omega[j][i] = (omega[i][j] + omega[j][i]) / Complex(2);
  d.period_matrix = omega;
  d.theta = make_theta_context(omega, prec);
  d.min_eigen_bound = d.theta.cholesky[0][0] * d.theta.cholesky[0][0];
  for (int i = 1; i < g; ++i)
    d.min_eigen_bound = std::min(d.min_eigen_bound, Real(d.theta.cholesky[i][i] * d.theta.cholesky[i][i]));

  // Riemann constant for base point infinity; confirm that theta vanishes on
  // Delta - alpha(g - 1 points), otherwise search the half periods.
  auto half_period = [&](const std::vector<int>& a, const std::vector<int>& b) {
    CVector v(g);
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j)
        if (a[j]) v[i] += Real(1) / 2 * omega[i][j];
      if (b[i]) v[i] += Complex(Real(1) / 2);
    }
    return v;
  };
  std::vector<int> ones(g, 1), b0(g);
  for (int i = 0; i < g; ++i) b0[i] = (g - i) % 2;
  CVector delta = half_period(ones, b0);
  std::mt19937_64 rng(0xde17a);
  std::vector<CVector> samples;
  for (int s = 0; s < 2; ++s) {
    CVector acc(g);
    for (int k = 0; k < g - 1; ++k) acc = add(acc, abel_jacobi(random_point(C.f, rng), d));
    samples.push_back(acc);
  }
  auto vanishes = [&](const CVector& cand) {
    for (const auto& s : samples)
      if (abs(theta_scaled(sub(cand, s), d.theta).scaled) > theta_threshold(prec)) return false;
    return true;
  };
  if (!vanishes(delta)) {
    bool found = false;
    for (int mask = 0; mask < (1 << (2 * g)) && !found; ++mask) {
      std::vector<int> a(g), b(g);
      for (int i = 0; i < g; ++i) {
        a[i] = (mask >> i) & 1;
        b[i] = (mask >> (g + i)) & 1;
      }
      CVector cand = half_period(a, b);
      if (vanishes(cand)) {
        delta = cand;
        found = true;
      }
    }
    if (!found) throw NumericalDegeneracy("no half period satisfies the Riemann vanishing check");
  }
  d.riemann_constant = delta;
  return d;
}

CVector abel_jacobi(const CurvePoint& p, const PeriodData& d) {
  int g = d.genus;
  if (p.at_infinity) return CVector(g);
  PrecisionScope scope(d.prec);
  const auto& e = d.branch_points;
  Real fx = abs(horner(d.f, p.x) - p.y * p.y);
  if (fx > ten_pow(-(d.prec.digits / 2)) * std::max(Real(1), Real(abs(p.y * p.y))))
    throw ValidationError("point is not on the curve: x = " + to_string(p.x, 20));
  if (abs(p.y) < ten_pow(-(d.prec.digits / 2)))
    throw ValidationError("Abel-Jacobi map at a Weierstrass point is not supported");
  // Ray x + dir * rho * (s / (1 - s))^2 chosen to stay far from the branch points.
  Complex dir;
  Real best = -1;
  for (int k = 0; k < 24; ++k) {
    Complex w = expi(2 * pi() * k / 24 + Real("0.1"));
    Real m = -1;
    for (const auto& o : e) {
      Complex r = (o - p.x) / w;
      Real dist = r.re > 0 ? Real(mp::abs(r.im)) : abs(o - p.x);
      if (m < 0 || dist < m) m = dist;
    }
    if (m > best) {
      best = m;
      dir = w;
    }
  }
  Real rho = std::max(Real(1), Real(abs(p.x)));
  std::vector<Complex> base;
  for (const auto& o : e) base.push_back(p.x - o);
  VecFn F = [&](const Real& s) {
    Real u = s / (1 - s);
    Complex X = p.x + (rho * u * u) * dir;
    Complex dX = (2 * rho * s / ((1 - s) * (1 - s) * (1 - s))) * dir;
    Complex y = p.y;
    for (size_t m = 0; m < e.size(); ++m) y *= sqrt((X - e[m]) / base[m]);
    Complex w = dX / y;
    CVector out(g);
    for (int j = 0; j < g; ++j) {
      out[j] = w;
      w *= X;
    }
    return out;
  };
  int n = std::max(16, d.prec.working_digits() / 2 + 8);
  Real tol = ten_pow(-(d.prec.digits + d.prec.guard / 2));
  CVector I(g);
  const char* cuts[] = {"0", "0.5", "0.9", "0.99", "1"};
  for (int k = 0; k < 4; ++k) {
    Real a(cuts[k]), b(cuts[k + 1]);
    CVector whole = gl(F, a, b, n, g);
    I = add(I, adaptive(F, a, b, whole, tol, n, g, 0));
  }
  CVector alpha = multiply(d.normalization_matrix, I);
  for (auto& v : alpha) v = -v;
  return alpha;
}

Real green_pairing(const CVector& alpha_d1, const CVector& alpha_d0,
                   const std::vector<std::pair<CVector, Real>>& evals, const PeriodData& d) {
  PrecisionScope scope(d.prec);
  RVector lin = multiply(d.theta.im_omega_inv, imag_part(sub(alpha_d1, alpha_d0)));
  Real total = 0;
  for (const auto& [ap, w] : evals) {
    CVector base = add(ap, d.riemann_constant);
    ThetaValue t1 = theta_scaled(sub(base, alpha_d1), d.theta);
    ThetaValue t0 = theta_scaled(sub(base, alpha_d0), d.theta);
    if (abs(t1.scaled) < theta_threshold(d.prec) || abs(t0.scaled) < theta_threshold(d.prec))
      throw ThetaNearZero("theta value below 1e-" + std::to_string(d.prec.digits / 2) + " in the Green function");
    total += w * (2 * (t1.log_abs() - t0.log_abs()) + 4 * pi() * dot(lin, imag_part(ap)));
  }
  return total;
}

Real green_pairing(const std::vector<CurvePoint>& d1, const std::vector<CurvePoint>& d0,
                   const std::vector<std::pair<CurvePoint, Rational>>& evals, const PeriodData& d) {
  PrecisionScope scope(d.prec);
  if (static_cast<int>(d1.size()) != d.genus || static_cast<int>(d0.size()) != d.genus)
    throw ValidationError("green_pairing needs effective divisors of degree g");
  Rational wsum;
  for (const auto& [p, w] : evals) wsum += w;
  if (wsum != 0) throw ValidationError("evaluation divisor must have degree zero");
  CVector a1(d.genus), a0(d.genus);
  for (const auto& p : d1) a1 = add(a1, abel_jacobi(p, d));
  for (const auto& p : d0) a0 = add(a0, abel_jacobi(p, d));
  std::vector<std::pair<CVector, Real>> ev;
  for (const auto& [p, w] : evals) ev.emplace_back(abel_jacobi(p, d), to_real(w));
  return green_pairing(a1, a0, ev, d);
}

namespace {

struct WeightedPoint {
  CurvePoint point;
  Rational weight;
};

// Complex points of a formal divisor; fibre terms give both sheets.
std::vector<WeightedPoint> complex_points(const FormalDivisor& D, const Poly& f) {
  std::vector<WeightedPoint> out;
  for (const auto& t : D.terms) {
    for (const auto& x : polynomial_roots(t.a)) {
      if (t.kind == DivisorTerm::Kind::Point) {
        out.push_back({{false, x, horner(t.b, x)}, t.coefficient});
      } else {
        Complex y = sqrt(horner(f, x));
        out.push_back({{false, x, y}, t.coefficient});
        out.push_back({{false, x, -y}, t.coefficient});
      }
    }
  }
  if (D.infinity_coefficient != 0) out.push_back({CurvePoint::infinity(), D.infinity_coefficient});
  return out;
}

class AbelJacobiCache {
 public:
  explicit AbelJacobiCache(const PeriodData& d) : d_(d), tol_(ten_pow(-(d.prec.digits / 2))) {}

  CVector operator()(const CurvePoint& p) {
    if (p.at_infinity) return CVector(d_.genus);
    for (const auto& [q, a] : seen_) {
      if (abs(q.x - p.x) > tol_ * std::max(Real(1), Real(abs(p.x)))) continue;
      Real scale = std::max(Real(1), Real(abs(p.y)));
      if (abs(q.y - p.y) < tol_ * scale) return a;
      if (abs(q.y + p.y) < tol_ * scale) {
        CVector n = a;
        for (auto& v : n) v = -v;
        return n;
      }
    }
    CVector a = abel_jacobi(p, d_);
    seen_.emplace_back(p, a);
    return a;
  }

 private:
  const PeriodData& d_;
  Real tol_;
  std::vector<std::pair<CurvePoint, CVector>> seen_;
};

}  // namespace

ArchimedeanResult archimedean_pairing(const FormalDivisor& D, const FormalDivisor& E, const PeriodData& d,
                                      std::uint64_t seed) {
  PrecisionScope scope(d.prec);
  if (D.degree() != 0 || E.degree() != 0) throw ValidationError("archimedean pairing needs degree-zero divisors");
  int g = d.genus;
  AbelJacobiCache aj(d);
  // g_D(E) = g_E(D): E is split into pieces R_k - S, each padded to degree g
  // by the same auxiliary points B; D supplies the evaluation points.
  std::vector<std::pair<CVector, Real>> evals;
  for (const auto& wp : complex_points(D, d.f)) evals.emplace_back(aj(wp.point), to_real(wp.weight));
  std::vector<std::pair<CVector, Real>> pieces;
  for (const auto& wp : complex_points(E, d.f)) pieces.emplace_back(aj(wp.point), to_real(wp.weight));

  constexpr int kAttempts = 8;
  std::string last;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(attempt) * 7919 + 1);
    CVector aS = aj(random_point(d.f, rng));
    CVector aB(g);
    for (int k = 0; k < g - 1; ++k) aB = add(aB, aj(random_point(d.f, rng)));
    try {
      CVector a0 = add(aS, aB);
      Real green = 0;
      for (const auto& [aR, w] : pieces) green += w * green_pairing(add(aR, aB), a0, evals, d);
      ArchimedeanResult r;
      r.green = green;
      r.value = -green / 2;
      r.attempts = attempt + 1;
      return r;
    } catch (const ThetaNearZero& ex) {
      last = ex.what();
    }
  }
  throw NumericalDegeneracy("archimedean pairing: theta vanished for " + std::to_string(kAttempts) +
                            " auxiliary samples (" + last + ")");
}

}  // namespace hyperheight
