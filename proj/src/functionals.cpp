#include "curvlab/functionals.hpp"

#include <cmath>

#include "curvlab/errors.hpp"

namespace curvlab {

Potential Potential::expression(ExprPtr e, ParamMap params) {
  Potential p;
  p.kind_ = Kind::Expression;
  p.label_ = print(*e);
  p.expr_ = std::move(e);
  p.params_ = std::move(params);
  return p;
}

Potential Potential::radial(RadialFn fn, std::string label) {
  Potential p;
  p.kind_ = Kind::Radial;
  p.radial_ = std::move(fn);
  p.label_ = std::move(label);
  return p;
}

bool Potential::zero_expression() const {
  if (kind_ == Kind::Expression) return is_zero_expr(*expr_);
  return false;
}

Jet Potential::jet_at(const Point& x, int dim) const {
  switch (kind_) {
    case Kind::Expression:
      return eval_jet(*expr_, std::span<const double>(x.data(), dim), dim,
                      params_);
    case Kind::Radial: {
      auto d = radial_(x[0]);
      Jet j(dim);
      j.coeff(0) = d[0];
      j.set_deriv(1, 0, 0, d[1]);
      j.set_deriv(2, 0, 0, d[2]);
      return j;
    }
    case Kind::None:
      break;
  }
  throw ConfigError("potential queried but none was configured");
}

double Potential::value_at(const Point& x, int dim) const {
  return jet_at(x, dim).value();
}

namespace {

Sym2d values_of(const Sym2<Jet>& t) {
  Sym2d v(t.dim);
  for (int i = 0; i < t.dim; ++i)
    for (int j = i; j < t.dim; ++j) v(i, j) = t(i, j).value();
  return v;
}

struct Fourth {
  Sym2d g, ginv, ricci, z;
  double s, norm_r2, norm_z2;
  Sym2d hess_s;
  double lap_s;
};

Fourth fourth_data(const JetGeometry& geo) {
  Fourth f;
  f.g = values_of(geo.g);
  f.ginv = values_of(geo.ginv);
  f.ricci = values_of(geo.ricci);
  f.z = values_of(geo.z);
  f.s = geo.s.value();
  f.norm_r2 = inner(f.ginv, f.ricci, f.ricci);
  f.norm_z2 = geo.dim == 3 ? inner(f.ginv, f.z, f.z) : 0.0;
  f.hess_s = hessian(geo, geo.s);
  f.lap_s = trace(f.ginv, f.hess_s);
  return f;
}

}  // namespace

Sym2d gradient_r2(const JetGeometry& geo) {
  Fourth f = fourth_data(geo);
  Sym2d rough = rough_laplacian(geo, geo.ricci);
  Sym2d action = curvature_action(geo, f.ricci);
  Sym2d out(geo.dim);
  double trace_part = 0.5 * (f.lap_s - f.norm_r2);
  for (int i = 0; i < geo.dim; ++i)
    for (int j = i; j < geo.dim; ++j)
      out(i, j) = rough(i, j) + f.hess_s(i, j) - 2.0 * action(i, j) -
                  trace_part * f.g(i, j);
  return out;
}

Sym2d gradient_z2(const JetGeometry& geo) {
  Fourth f = fourth_data(geo);
  Sym2d rough = rough_laplacian(geo, geo.z);
  Sym2d action = curvature_action(geo, f.z);
  Sym2d out(geo.dim);
  double trace_part = 0.5 * (f.norm_z2 - f.lap_s / 3.0);
  for (int i = 0; i < geo.dim; ++i)
    for (int j = i; j < geo.dim; ++j)
      out(i, j) = rough(i, j) + f.hess_s(i, j) / 3.0 - 2.0 * action(i, j) +
                  trace_part * f.g(i, j);
  return out;
}

Sym2d l_star(const JetGeometry& geo, const Jet& f) {
  Sym2d g = values_of(geo.g);
  Sym2d ricci = values_of(geo.ricci);
  Sym2d hess = hessian(geo, f);
  double lap = trace(values_of(geo.ginv), hess);
  double fv = f.value();
  Sym2d out(geo.dim);
  for (int i = 0; i < geo.dim; ++i)
    for (int j = i; j < geo.dim; ++j)
      out(i, j) = hess(i, j) - lap * g(i, j) - fv * ricci(i, j);
  return out;
}

Sym2d gradient_r2_conformally_flat(const JetGeometry& geo) {
  Fourth f = fourth_data(geo);
  Sym2d rr = compose(f.ricci, f.ginv, f.ricci);
  Sym2d action = curvature_action(geo, f.ricci);
  Sym2d out(geo.dim);
  for (int i = 0; i < geo.dim; ++i)
    for (int j = i; j < geo.dim; ++j)
      out(i, j) = -rr(i, j) - action(i, j) + 0.5 * f.norm_r2 * f.g(i, j);
  return out;
}

Sym2d gradient_r2_weitzenbock(const JetGeometry& geo) {
  const int dim = geo.dim;
  Fourth f = fourth_data(geo);

  // (dr)_kij = nabla_k r_ij - nabla_i r_kj, antisymmetric in (k, i);
  // delta contracts the first slot: (delta dr)_ij = -nabla^k (dr)_kij.
  // Expand through the second covariant derivative of the Ricci jets.
  double d2[3][3][3][3];
  second_covariant_derivative(geo, geo.ricci, d2);
  Sym2d delta_dr(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double acc = 0.0;
      for (int l = 0; l < dim; ++l)
        for (int k = 0; k < dim; ++k)
          acc += f.ginv(l, k) * (d2[l][k][i][j] - d2[l][i][k][j]);
      delta_dr(i, j) = -acc;
    }

  Sym2d rr = compose(f.ricci, f.ginv, f.ricci);
  Sym2d action = curvature_action(geo, f.ricci);
  Sym2d out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      out(i, j) = 0.5 * delta_dr(i, j) + 0.5 * f.hess_s(i, j) - rr(i, j) -
                  action(i, j) - 0.5 * f.lap_s * f.g(i, j) +
                  0.5 * f.norm_r2 * f.g(i, j);
  return out;
}

double weitzenbock_defect(const JetGeometry& geo) {
  Sym2d a = gradient_r2_weitzenbock(geo);
  Sym2d b = gradient_r2(geo);
  return max_abs_component(a - b);
}

Sym2d gradient_r2(const MetricChart& chart, const Point& x) {
  return gradient_r2(build_geometry(chart, x));
}
Sym2d gradient_z2(const MetricChart& chart, const Point& x) {
  return gradient_z2(build_geometry(chart, x));
}
Sym2d l_star(const MetricChart& chart, const Expr& f, const Point& x) {
  JetGeometry geo = build_geometry(chart, x);
  Jet fj = eval_jet(f, std::span<const double>(x.data(), chart.dim()),
                    chart.dim(), chart.params());
  return l_star(geo, fj);
}
Sym2d gradient_r2_weitzenbock(const MetricChart& chart, const Point& x) {
  return gradient_r2_weitzenbock(build_geometry(chart, x));
}

const char* system_name(EqSystem s) {
  switch (s) {
    case EqSystem::R2: return "R2";
    case EqSystem::R2s: return "R2s";
    case EqSystem::Z2s: return "Z2s";
    case EqSystem::Vacuum: return "vacuum";
  }
  return "?";
}

EqSystem system_from_name(const std::string& name) {
  if (name == "R2" || name == "r2") return EqSystem::R2;
  if (name == "R2s" || name == "r2s") return EqSystem::R2s;
  if (name == "Z2s" || name == "z2s") return EqSystem::Z2s;
  if (name == "vacuum") return EqSystem::Vacuum;
  throw ConfigError("unknown equation system '" + name + "'");
}

ResidualReport residual(EqSystem system, const MetricChart& chart,
                        const std::optional<PotentialSpec>& pot,
                        const std::vector<Point>& points, double tol) {
  const bool needs_pot = system != EqSystem::R2;
  if (needs_pot) {
    if (!pot || !pot->omega.valid())
      throw ConfigError(std::string(system_name(system)) +
                        " system requires a potential");
    if (pot->alpha < 0.0) throw ConfigError("coupling alpha must be >= 0");
    if (pot->alpha == 0.0 && pot->omega.zero_expression())
      throw ConfigError(
          "alpha = 0 (static vacuum) requires a potential that is not "
          "identically zero");
  }

  ResidualReport report;
  report.system = system;
  report.tol = tol;
  report.rows.reserve(points.size());

  for (const Point& x : points) {
    JetGeometry geo = build_geometry(chart, x);
    ResidualRow row;
    row.x = x;
    row.s = geo.s.value();

    Sym2d g = values_of(geo.g);
    Sym2d ginv = values_of(geo.ginv);
    Sym2d ricci = values_of(geo.ricci);
    row.norm_r2 = inner(ginv, ricci, ricci);

    Jet omega_jet(geo.dim);
    double lap_omega = 0.0;
    if (needs_pot) {
      omega_jet = pot->omega.jet_at(x, geo.dim);
      row.omega = omega_jet.value();
      lap_omega = laplacian(geo, omega_jet);
    }

    Sym2d full(geo.dim);
    switch (system) {
      case EqSystem::R2: {
        full = gradient_r2(geo);
        // trace equation: Delta s + 1/3 |r|^2 = 0, via the scalar pipeline
        row.trace_residual = std::abs(laplacian(geo, geo.s) + row.norm_r2 / 3.0);
        break;
      }
      case EqSystem::Vacuum: {
        full = l_star(geo, omega_jet);
        row.trace_residual = std::abs(lap_omega);
        break;
      }
      case EqSystem::R2s: {
        Sym2d gr = gradient_r2(geo);
        Sym2d ls = l_star(geo, omega_jet);
        full = pot->alpha * gr + ls;
        row.trace_residual =
            std::abs(lap_omega + 0.25 * pot->alpha * row.norm_r2);
        break;
      }
      case EqSystem::Z2s: {
        Sym2d gz = gradient_z2(geo);
        Sym2d ls = l_star(geo, omega_jet);
        full = pot->alpha * gz + ls;
        Sym2d z = values_of(geo.z);
        double norm_z2 = inner(ginv, z, z);
        row.trace_residual = std::abs(lap_omega + 0.25 * pot->alpha * norm_z2);
        break;
      }
    }
    row.full_residual = endo_norm(g, full);

    row.pass = row.full_residual <= tol && row.trace_residual <= tol;
    if (system == EqSystem::R2s && std::abs(row.s) > tol) row.pass = false;
    report.max_full = std::max(report.max_full, row.full_residual);
    report.max_trace = std::max(report.max_trace, row.trace_residual);
    report.rows.push_back(row);
  }
  report.pass = true;
  for (const auto& row : report.rows) report.pass = report.pass && row.pass;
  return report;
}

FunctionalValues assemble_functionals(double r2_integral, double z2_integral,
                                      double s2_integral, double volume,
                                      double eps) {
  FunctionalValues f;
  f.r2 = r2_integral;
  f.z2 = z2_integral;
  f.s2 = std::sqrt(s2_integral);
  f.volume = volume;
  f.i_eps = eps * std::cbrt(volume) * f.r2 + std::pow(volume, 1.0 / 6.0) * f.s2;
  return f;
}

}  // namespace curvlab
