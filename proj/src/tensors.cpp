#include "curvlab/tensors.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

double det_sym(const Sym2d& g) {
  if (g.dim == 2) return g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
  return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) -
         g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2)) +
         g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
}

Sym2d inverse_sym(const Sym2d& g) {
  Sym2d inv(g.dim);
  double d = det_sym(g);
  if (d == 0.0) throw SpdError("singular metric: zero determinant");
  if (g.dim == 2) {
    inv(0, 0) = g(1, 1) / d;
    inv(1, 1) = g(0, 0) / d;
    inv(0, 1) = -g(0, 1) / d;
    return inv;
  }
  inv(0, 0) = (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) / d;
  inv(0, 1) = (g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2)) / d;
  inv(0, 2) = (g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1)) / d;
  inv(1, 1) = (g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2)) / d;
  inv(1, 2) = (g(0, 1) * g(0, 2) - g(0, 0) * g(1, 2)) / d;
  inv(2, 2) = (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1)) / d;
  return inv;
}

std::array<double, 3> principal_minors(const Sym2d& g) {
  std::array<double, 3> m{1.0, 1.0, 1.0};
  m[0] = g(0, 0);
  m[1] = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
  if (g.dim == 3) m[2] = det_sym(g);
  return m;
}

double inner(const Sym2d& ginv, const Sym2d& a, const Sym2d& b) {
  // a^{ij} = g^{ik} g^{jl} a_kl, then contract with b_ij
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      double aij = 0.0;
      for (int k = 0; k < a.dim; ++k)
        for (int l = 0; l < a.dim; ++l)
          aij += ginv(i, k) * ginv(j, l) * a(k, l);
      s += aij * b(i, j);
    }
  return s;
}

Sym2d compose(const Sym2d& a, const Sym2d& ginv, const Sym2d& b) {
  Sym2d r(a.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int j = i; j < a.dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < a.dim; ++k)
        for (int l = 0; l < a.dim; ++l) s += a(i, k) * ginv(k, l) * b(l, j);
      r(i, j) = s;
    }
  return r;
}

namespace {

// Eigenvalues of a symmetric 3x3 matrix by the trigonometric closed form.
std::array<double, 3> sym3_eigenvalues(const std::array<std::array<double, 3>, 3>& a) {
  double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  if (p1 == 0.0) {
    std::array<double, 3> e{a[0][0], a[1][1], a[2][2]};
    std::sort(e.begin(), e.end());
    return e;
  }
  double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  double p2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = a[i][i] - q;
    p2 += d * d;
  }
  p2 += 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return {q, q, q};
  // B = (A - q I)/p; det(B)/2 in [-1, 1] up to round-off
  double b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  double r = std::clamp(detb / 2.0, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  double e0 = q + 2.0 * p * std::cos(phi);
  double e2 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  double e1 = 3.0 * q - e0 - e2;
  std::array<double, 3> e{e0, e1, e2};
  std::sort(e.begin(), e.end());
  return e;
}

// Lower-triangular Cholesky factor of an SPD Sym2.
std::array<std::array<double, 3>, 3> cholesky(const Sym2d& g) {
  std::array<std::array<double, 3>, 3> l{};
  for (int i = 0; i < g.dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 0.0) throw SpdError("metric is not positive definite");
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return l;
}

}  // namespace

std::array<double, 3> endo_eigenvalues(const Sym2d& g, const Sym2d& t) {
  // Reduce g^{-1} t to the ordinary symmetric problem L^{-1} t L^{-T}.
  auto l = cholesky(g);
  int n = g.dim;
  // y = L^{-1} t  (solve L y = t column-wise)
  double y[3][3] = {};
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i) {
      double s = t(i, c);
      for (int k = 0; k < i; ++k) s -= l[i][k] * y[k][c];
      y[i][c] = s / l[i][i];
    }
  // s = y L^{-T}  (solve s L^T = y row-wise)
  std::array<std::array<double, 3>, 3> a{};
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      double s = y[r][j];
      for (int k = 0; k < j; ++k) s -= a[r][k] * l[j][k];
      a[r][j] = s / l[j][j];
    }
  if (n == 2) {
    double tr = a[0][0] + a[1][1];
    double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 - disc, tr / 2.0 + disc, 0.0};
  }
  return sym3_eigenvalues(a);
}

double endo_norm(const Sym2d& g, const Sym2d& t) {
  auto e = endo_eigenvalues(g, t);
  double m = 0.0;
  for (int i = 0; i < g.dim; ++i) m = std::max(m, std::abs(e[i]));
  return m;
}

}  // namespace curvlab
