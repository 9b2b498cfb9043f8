#include "curvlab/conformal.hpp"

#include <cmath>

#include "curvlab/errors.hpp"
#include "curvlab/exact_solutions.hpp"

namespace curvlab {

namespace {

void require_positive(double v, const char* what, const Point& x) {
  if (!(v > 0.0))
    throw DomainError(std::string(what) + " must be positive, got " +
                      std::to_string(v) + " at (" + std::to_string(x[0]) +
                      ", " + std::to_string(x[1]) + ", " +
                      std::to_string(x[2]) + ")");
}

}  // namespace

ConformalPair make_conformal_pair(const MetricChart& base, ExprPtr phi) {
  ConformalPair pair;
  pair.base = base;
  pair.phi = phi;
  pair.scaled = base;
  for (int i = 0; i < base.dim(); ++i)
    for (int j = i; j < base.dim(); ++j)
      pair.scaled.set_component(i, j, ex::mul(phi, base.component(i, j)));
  return pair;
}

ScalarPair conformal_scalar(const ConformalPair& pair, const Point& x) {
  const int dim = pair.base.dim();
  if (dim != 3)
    throw DomainError("the conformal scalar law is the dimension-3 form");
  JetGeometry geo = build_geometry(pair.base, x);
  std::span<const double> xs(x.data(), dim);
  Jet phi = eval_jet(*pair.phi, xs, dim, pair.base.params());
  require_positive(phi.value(), "conformal factor", x);

  Jet lp = log(phi);
  double lap_lp = laplacian(geo, lp);
  double grad2 = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      grad2 += geo.ginv(i, j).value() * lp.deriv(i == 0, i == 1, i == 2) *
               lp.deriv(j == 0, j == 1, j == 2);

  ScalarPair out;
  out.formula = (geo.s.value() - 2.0 * lap_lp - 0.5 * grad2) / phi.value();
  out.direct = build_geometry(pair.scaled, x).s.value();
  return out;
}

RicciPair conformal_ricci(const MetricChart& g, const Expr& u, const Point& x) {
  const int dim = g.dim();
  std::span<const double> xs(x.data(), dim);
  Jet uj = eval_jet(u, xs, dim, g.params());
  require_positive(uj.value(), "conformal factor", x);

  JetGeometry geo = build_geometry(g, x);
  Sym2d hess = hessian(geo, uj);
  Sym2d ginv(dim), gv(dim), ricci(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      ginv(i, j) = geo.ginv(i, j).value();
      gv(i, j) = geo.g(i, j).value();
      ricci(i, j) = geo.ricci(i, j).value();
    }
  double lap_u = trace(ginv, hess);
  double uv = uj.value();
  Vec3d du{};
  for (int i = 0; i < dim; ++i) du[i] = uj.deriv(i == 0, i == 1, i == 2);

  RicciPair out;
  out.formula = Sym2d(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      out.formula(i, j) = ricci(i, j) - hess(i, j) / uv -
                          lap_u / uv * gv(i, j) +
                          2.0 * (du[i] / uv) * (du[j] / uv);

  MetricChart scaled = g;
  ExprPtr u2 = ex::sq(std::make_shared<const Expr>(u));
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      scaled.set_component(i, j, ex::mul(u2, g.component(i, j)));
  JetGeometry sg = build_geometry(scaled, x);
  out.direct = Sym2d(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) out.direct(i, j) = sg.ricci(i, j).value();
  return out;
}

ScalarPair gauss_conformal_2d(const MetricChart& base2d, const Expr& f,
                              const Point& x) {
  if (base2d.dim() != 2)
    throw DomainError("gauss_conformal_2d needs a 2-dimensional chart");
  std::span<const double> xs(x.data(), 2);
  Jet fj = eval_jet(f, xs, 2, base2d.params());
  require_positive(fj.value(), "conformal factor", x);

  JetGeometry geo = build_geometry(base2d, x);
  double K = 0.5 * geo.s.value();
  Jet lf = log(fj);
  double lap_lf = laplacian(geo, lf);

  ScalarPair out;
  out.formula = (K - lap_lf) / (fj.value() * fj.value());

  MetricChart scaled = base2d;
  ExprPtr f2 = ex::sq(std::make_shared<const Expr>(f));
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j)
      scaled.set_component(i, j, ex::mul(f2, base2d.component(i, j)));
  out.direct = 0.5 * build_geometry(scaled, x).s.value();
  return out;
}

SubmersionScalars submersion_scalar(const MetricChart& base2d, const Expr& f,
                                    const Point& x) {
  if (base2d.dim() != 2)
    throw DomainError("submersion_scalar needs a 2-dimensional base");
  std::span<const double> xs(x.data(), 2);
  Jet fj = eval_jet(f, xs, 2, base2d.params());
  require_positive(fj.value(), "fiber length", x);

  JetGeometry base = build_geometry(base2d, x);
  SubmersionScalars out;
  out.lhs = base.s.value();
  out.a_norm2 = 0.0;  // warped product: integrable horizontal distribution

  Jet lf = log(fj);
  out.lap_log_f = laplacian(base, lf);
  out.h_norm2 = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.h_norm2 += base.ginv(i, j).value() * lf.deriv(i == 0, i == 1) *
                     lf.deriv(j == 0, j == 1);

  MetricChart total = s1_invariant_chart(
      base2d, std::make_shared<const Expr>(f));
  out.s_total = build_geometry(total, x).s.value();
  out.rhs = out.s_total + out.a_norm2 + 2.0 * out.h_norm2 + 2.0 * out.lap_log_f;
  return out;
}

}  // namespace curvlab
