#include "support.hpp"

#include <cassert>

#include "curvlab/tensors.hpp"

namespace curvlab::test {

namespace {

// Central stencil for the n-th derivative along one axis, error O(h^2).
// n = 0 is the identity.
double axis_derivative(const std::function<double(double)>& f, double x, int n,
                       double h) {
  switch (n) {
    case 0:
      return f(x);
    case 1:
      return (f(x + h) - f(x - h)) / (2 * h);
    case 2:
      return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) /
             (2 * h * h * h);
    case 4:
      return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) +
              f(x - 2 * h)) /
             (h * h * h * h);
    default:
      assert(false);
      return 0.0;
  }
}

double fd_partial_raw(const ScalarFn& f, std::array<double, 3> x,
                      std::array<int, 3> alpha, double h) {
  // peel one axis at a time, innermost first
  for (int axis = 0; axis < 3; ++axis) {
    if (alpha[axis] == 0) continue;
    int n = alpha[axis];
    std::array<int, 3> rest = alpha;
    rest[axis] = 0;
    auto g = [&](double v) {
      std::array<double, 3> y = x;
      y[axis] = v;
      return fd_partial_raw(f, y, rest, h);
    };
    return axis_derivative(g, x[axis], n, h);
  }
  return f(x);
}

}  // namespace

double fd_partial(const ScalarFn& f, std::array<double, 3> x,
                  const std::array<int, 3>& alpha, double h, double* noise) {
  // Two Richardson levels on the O(h^2) stencils: O(h^6).
  double d1 = fd_partial_raw(f, x, alpha, h);
  double d2 = fd_partial_raw(f, x, alpha, h / 2);
  double d4 = fd_partial_raw(f, x, alpha, h / 4);
  double r1 = (4.0 * d2 - d1) / 3.0;
  double r2 = (4.0 * d4 - d2) / 3.0;
  if (noise) {
    // round-off of the finest stencil: eps * scale * sum|coef| / h_f^k
    static constexpr double kCoefSum[5] = {1.0, 1.0, 4.0, 3.0, 16.0};
    double hf = h / 4;
    double amp = 1.0;
    for (int axis = 0; axis < 3; ++axis)
      amp *= kCoefSum[alpha[axis]] / std::pow(hf, alpha[axis]);
    double scale = std::max(1.0, std::abs(f(x)));
    *noise = 4.0 * 2.2e-16 * scale * amp;
  }
  return (16.0 * r2 - r1) / 15.0;
}

double fd_partial(const ScalarFn& f, std::array<double, 3> x,
                  const std::array<int, 3>& alpha, double* noise) {
  int order = alpha[0] + alpha[1] + alpha[2];
  static constexpr double kBaseStep[5] = {0.05, 2e-3, 8e-3, 0.02, 0.05};
  return fd_partial(f, x, alpha, kBaseStep[order], noise);
}

namespace {

ExprPtr random_affine(Rng& rng) {
  ExprPtr e = ex::c(rng.uniform(-1.0, 1.0));
  for (int axis = 0; axis < 3; ++axis)
    e = ex::add(std::move(e), ex::mul(ex::c(rng.uniform(-0.5, 0.5)), ex::x(axis)));
  return e;
}

// sin of something is always a safe bounded argument
ExprPtr random_bounded(Rng& rng, int depth) {
  return Expr::call(FuncOp::Sin, random_safe_expr(rng, depth));
}

}  // namespace

ExprPtr random_safe_expr(Rng& rng, int depth) {
  if (depth <= 0) return random_affine(rng);
  switch (rng.uniform_int(0, 9)) {
    case 0:
      return ex::add(random_safe_expr(rng, depth - 1),
                     random_safe_expr(rng, depth - 1));
    case 1:
      return ex::sub(random_safe_expr(rng, depth - 1),
                     random_safe_expr(rng, depth - 1));
    case 2:
      return ex::mul(random_safe_expr(rng, depth - 1),
                     random_bounded(rng, depth - 2));
    case 3:  // denominator bounded away from zero
      return ex::div(random_safe_expr(rng, depth - 1),
                     ex::add(ex::c(2.5), random_bounded(rng, depth - 2)));
    case 4:
      return Expr::call(FuncOp::Sin, random_safe_expr(rng, depth - 1));
    case 5:
      return Expr::call(FuncOp::Cos, random_safe_expr(rng, depth - 1));
    case 6:
      return Expr::call(FuncOp::Exp,
                        ex::mul(ex::c(0.8), random_bounded(rng, depth - 2)));
    case 7:
      return Expr::call(FuncOp::Log,
                        ex::add(ex::c(2.5), random_bounded(rng, depth - 2)));
    case 8:
      return Expr::call(FuncOp::Sqrt,
                        ex::add(ex::c(2.0), random_bounded(rng, depth - 2)));
    default:
      return ex::pow(ex::add(ex::c(2.0), random_bounded(rng, depth - 2)),
                     ex::c(rng.uniform(-1.5, 1.5)));
  }
}

MetricChart random_diagonal_chart(Rng& rng) {
  MetricChart chart(3, "random-diagonal");
  for (int i = 0; i < 3; ++i) {
    ExprPtr e = ex::c(1.0 + rng.uniform(0.0, 0.5));
    for (int k = 0; k < 2; ++k) {
      int axis = rng.uniform_int(0, 2);
      double amp = rng.uniform(0.04, 0.14);
      double freq = rng.uniform_int(1, 2);
      double phase = rng.uniform(0.0, 6.28);
      auto wave = Expr::call(rng.uniform_int(0, 1) ? FuncOp::Sin : FuncOp::Cos,
                             ex::add(ex::mul(ex::c(freq), ex::x(axis)),
                                     ex::c(phase)));
      e = ex::add(std::move(e), ex::mul(ex::c(amp), std::move(wave)));
    }
    chart.set_component(i, i, std::move(e));
  }
  return chart;
}

Point random_point(Rng& rng) {
  return {rng.uniform(0.3, 5.8), rng.uniform(0.3, 5.8), rng.uniform(0.3, 5.8)};
}

Sym2d FdGeometry::christoffel_corrected_derivative(
    const std::function<Sym2d(const Point&)>& field, const Point& x,
    int axis) const {
  auto partial = [&](double step) {
    Point xp = x, xm = x;
    xp[axis] += step;
    xm[axis] -= step;
    Sym2d a = field(xp), b = field(xm);
    Sym2d r(a.dim);
    for (int s = 0; s < 6; ++s) r.v[s] = (a.v[s] - b.v[s]) / (2 * step);
    return r;
  };
  Sym2d dh = partial(h), dh2 = partial(h / 2);
  Sym2d d(dh.dim);
  for (int s = 0; s < 6; ++s) d.v[s] = (4.0 * dh2.v[s] - dh.v[s]) / 3.0;

  Ten3d gamma = christoffels(x);
  Sym2d t = field(x);
  Sym2d out(t.dim);
  for (int i = 0; i < t.dim; ++i)
    for (int j = i; j < t.dim; ++j) {
      double acc = d(i, j);
      for (int m = 0; m < t.dim; ++m)
        acc -= gamma[m][axis][i] * t(m, j) + gamma[m][axis][j] * t(i, m);
      out(i, j) = acc;
    }
  return out;
}

Ten3d FdGeometry::covariant_derivative(
    const std::function<Sym2d(const Point&)>& field, const Point& x) const {
  Ten3d out{};
  for (int k = 0; k < chart.dim(); ++k) {
    Sym2d d = christoffel_corrected_derivative(field, x, k);
    for (int i = 0; i < chart.dim(); ++i)
      for (int j = 0; j < chart.dim(); ++j) out[k][i][j] = d(i, j);
  }
  return out;
}

Sym2d FdGeometry::rough_laplacian(
    const std::function<Sym2d(const Point&)>& field, const Point& x) const {
  const int dim = chart.dim();
  // nabla_l (nabla_k T) by differencing the covariant-derivative field.
  auto nabla = [&](const Point& y) { return covariant_derivative(field, y); };
  Ten3d base = nabla(x);
  Ten3d gamma = christoffels(x);

  // second derivative tensor d2[l][k][i][j]
  double d2[3][3][3][3];
  for (int l = 0; l < dim; ++l) {
    auto partial = [&](double step) {
      Point xp = x, xm = x;
      xp[l] += step;
      xm[l] -= step;
      Ten3d a = nabla(xp), b = nabla(xm);
      Ten3d r{};
      for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            r[k][i][j] = (a[k][i][j] - b[k][i][j]) / (2 * step);
      return r;
    };
    Ten3d dh = partial(h), dh2 = partial(h / 2);
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double acc = (4.0 * dh2[k][i][j] - dh[k][i][j]) / 3.0;
          for (int m = 0; m < dim; ++m) {
            acc -= gamma[m][l][k] * base[m][i][j];
            acc -= gamma[m][l][i] * base[k][m][j];
            acc -= gamma[m][l][j] * base[k][i][m];
          }
          d2[l][k][i][j] = acc;
        }
  }

  Sym2d ginv = inverse_sym(chart.values(x));
  Sym2d out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) acc += ginv(k, l) * d2[k][l][i][j];
      out(i, j) = -acc;
    }
  return out;
}

Ten3d FdGeometry::christoffels(const Point& x) const {
  const int dim = chart.dim();
  // dg[k][i][j] by Richardson central differences of the raw components
  double dg[3][3][3];
  for (int k = 0; k < dim; ++k) {
    auto partial = [&](double step) {
      Point xp = x, xm = x;
      xp[k] += step;
      xm[k] -= step;
      Sym2d a = chart.values(xp), b = chart.values(xm);
      Sym2d r(dim);
      for (int s = 0; s < 6; ++s) r.v[s] = (a.v[s] - b.v[s]) / (2 * step);
      return r;
    };
    Sym2d dh = partial(h), dh2 = partial(h / 2);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        dg[k][i][j] = (4.0 * dh2(i, j) - dh(i, j)) / 3.0;
  }
  Sym2d ginv = inverse_sym(chart.values(x));
  Ten3d gamma{};
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (int l = 0; l < dim; ++l)
          acc += ginv(k, l) * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gamma[k][i][j] = 0.5 * acc;
      }
  return gamma;
}

}  // namespace curvlab::test
