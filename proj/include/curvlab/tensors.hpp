#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "curvlab/errors.hpp"

namespace curvlab {

// Symmetric 2-tensor with lower indices; only the upper triangle is stored.
// Component order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).
template <typename T>
struct Sym2 {
  int dim = 3;
  std::array<T, 6> v{};

  Sym2() = default;
  explicit Sym2(int d) : dim(d) {}

  static constexpr int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    return i == 0 ? j : (j == 1 ? 3 : (i == 1 ? 4 : 5));
  }

  T& operator()(int i, int j) { return v[slot(i, j)]; }
  const T& operator()(int i, int j) const { return v[slot(i, j)]; }

  Sym2& operator+=(const Sym2& o) {
    for (int k = 0; k < 6; ++k) v[k] += o.v[k];
    return *this;
  }
  Sym2& operator-=(const Sym2& o) {
    for (int k = 0; k < 6; ++k) v[k] -= o.v[k];
    return *this;
  }
  template <typename S>
  Sym2& operator*=(const S& s) {
    for (int k = 0; k < 6; ++k) v[k] = v[k] * s;
    return *this;
  }
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  template <typename S>
  friend Sym2 operator*(Sym2 a, const S& s) { return a *= s; }
  template <typename S>
  friend Sym2 operator*(const S& s, Sym2 a) { return a *= s; }
};

using Sym2d = Sym2<double>;
using Vec3d = std::array<double, 3>;

// 3-index array of values, T[k][i][j]; used for nabla T and the Cotton tensor.
using Ten3d = std::array<std::array<std::array<double, 3>, 3>, 3>;

// --- dense linear algebra on the small value types ---

double det_sym(const Sym2d& g);
Sym2d inverse_sym(const Sym2d& g);

// Leading principal minors, for the positive-definiteness check.
std::array<double, 3> principal_minors(const Sym2d& g);

inline double trace(const Sym2d& ginv, const Sym2d& t) {
  double s = 0.0;
  for (int i = 0; i < t.dim; ++i)
    for (int j = 0; j < t.dim; ++j) s += ginv(i, j) * t(i, j);
  return s;
}

// <A,B>_g with both indices raised by ginv.
double inner(const Sym2d& ginv, const Sym2d& a, const Sym2d& b);

// Endomorphism composition lowered back: (a o b)_ij = a_ik g^{kl} b_lj.
Sym2d compose(const Sym2d& a, const Sym2d& ginv, const Sym2d& b);

// Eigenvalues of the endomorphism ginv * t (real since t is g-symmetric),
// sorted ascending.  Frame-invariant measure of a residual tensor.
std::array<double, 3> endo_eigenvalues(const Sym2d& g, const Sym2d& t);

// max |eigenvalue| of ginv * t.
double endo_norm(const Sym2d& g, const Sym2d& t);

inline double max_abs_component(const Sym2d& t) {
  double m = 0.0;
  for (int i = 0; i < t.dim; ++i)
    for (int j = i; j < t.dim; ++j) m = std::max(m, std::abs(t(i, j)));
  return m;
}

}  // namespace curvlab
