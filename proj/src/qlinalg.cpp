#include "qlinalg.hpp"

#include "hyperheight/errors.hpp"

namespace hyperheight::detail {

QMatrix multiplication_matrix(const Poly& b, const Poly& a) {
  int d = a.degree();
  QMatrix M(d, std::vector<Rational>(d));
  Poly col = b % a;
  for (int i = 0; i < d; ++i) {
    for (int r = 0; r < d; ++r) M[r][i] = col.coeff(r);
    col = (col * Poly::x()) % a;
  }
  return M;
}

Poly charpoly(const QMatrix& M) {
  // Faddeev-LeVerrier: c_{n-k} = -tr(M N_k) / k with N_1 = I, N_{k+1} = M N_k + c_{n-k} I.
  size_t n = M.size();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix N(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i) N[i][i] = 1;
  for (size_t k = 1; k <= n; ++k) {
    QMatrix MN(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l)
        if (M[i][l] != 0)
          for (size_t j = 0; j < n; ++j) MN[i][j] += M[i][l] * N[l][j];
    Rational tr;
    for (size_t i = 0; i < n; ++i) tr += MN[i][i];
    c[n - k] = -tr / static_cast<long>(k);
    for (size_t i = 0; i < n; ++i) MN[i][i] += c[n - k];
    N = std::move(MN);
  }
  return Poly(c);
}

int rank(QMatrix M) {
  int r = 0;
  size_t rows = M.size(), cols = rows ? M[0].size() : 0;
  for (size_t c = 0; c < cols && r < static_cast<int>(rows); ++c) {
    size_t piv = r;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (M[i][c] == 0) continue;
      Rational q = M[i][c] / M[r][c];
      for (size_t j = c; j < cols; ++j) M[i][j] -= q * M[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<Rational> solve(QMatrix A, std::vector<Rational> r) {
  size_t n = A.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw ValidationError("singular linear system");
    std::swap(A[piv], A[c]);
    std::swap(r[piv], r[c]);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || A[i][c] == 0) continue;
      Rational q = A[i][c] / A[c][c];
      for (size_t j = c; j < n; ++j) A[i][j] -= q * A[c][j];
      r[i] -= q * r[c];
    }
  }
  for (size_t i = 0; i < n; ++i) r[i] /= A[i][i];
  return r;
}

}  // namespace hyperheight::detail
