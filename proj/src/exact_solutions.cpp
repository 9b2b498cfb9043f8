#include "curvlab/exact_solutions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "curvlab/errors.hpp"

namespace curvlab {

KasnerExponents kasner_exponents(double a) {
  if (!(a >= -1.0 && a <= 1.0))
    throw DomainError("Kasner parameter must lie in [-1, 1], got " +
                      std::to_string(a));
  if (a == 0.0) return {0.0, 1.0, 0.0};  // continuous limit of the formulas
  if (a == 1.0) return {0.0, 0.0, 1.0};
  double d = a - 1.0 + 1.0 / a;
  return {(a - 1.0) / d, (1.0 / a - 1.0) / d, 1.0 / d};
}

MetricChart kasner_chart(double a) {
  KasnerExponents e = kasner_exponents(a);
  MetricChart chart(3, "kasner");
  chart.set_component(0, 0, ex::c(1.0));
  chart.set_component(1, 1, ex::pow(ex::x(0), 2.0 * e.alpha));
  chart.set_component(2, 2, ex::pow(ex::x(0), 2.0 * e.beta));
  chart.set_range(0, {1e-9, 1e300, false});
  return chart;
}

Potential kasner_potential(double a, double c) {
  KasnerExponents e = kasner_exponents(a);
  return Potential::expression(
      ex::mul(ex::c(c), ex::pow(ex::x(0), e.gamma)));
}

MetricChart schwarzschild_chart(double m) {
  if (!(m > 0.0))
    throw DomainError("Schwarzschild mass must be positive, got " +
                      std::to_string(m));
  MetricChart chart(3, "schwarzschild");
  chart.params()["m"] = m;
  chart.set_component(0, 0, parse("1/(1 - 2*m/r)"));
  chart.set_component(1, 1, parse("r^2"));
  chart.set_component(2, 2, parse("r^2 * sin(phi)^2"));
  chart.set_range(0, {2.0 * m, 1e300, false});
  chart.set_range(1, {0.0, M_PI, false});
  chart.set_range(2, {-1e300, 1e300, true});
  return chart;
}

ExprPtr schwarzschild_u_expr() { return parse("sqrt(1 - 2*m/r)"); }

Potential schwarzschild_vacuum_potential(double m) {
  return Potential::expression(schwarzschild_u_expr(), {{"m", m}});
}

namespace {

// J(r) = \int_0^T 2 t^{-2} [(2m+t^2)^{-7/2} - (2m)^{-7/2}] dt, T = sqrt(r-2m).
// Smooth integrand, evaluated cancellation-free via expm1/log1p; tends to
// -7 (2m)^{-9/2} as t -> 0.
double tau_integral(double m, double r) {
  const double tm = 2.0 * m;
  const double c0 = std::pow(tm, -3.5);
  auto integrand = [&](double t) {
    double t2 = t * t;
    if (t2 == 0.0) return -7.0 * std::pow(tm, -4.5);
    return 2.0 / t2 * c0 * std::expm1(-3.5 * std::log1p(t2 / tm));
  };
  double T = std::sqrt(r - 2.0 * m);
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, T, 12, 1e-13, &error);
  if (!(std::isfinite(value)) || error > 1e-9 * std::max(1.0, std::abs(value)))
    throw NumericError("potential quadrature did not converge (r = " +
                       std::to_string(r) + ", estimated error " +
                       std::to_string(error) + ")");
  return value;
}

void require_outside_horizon(double m, double r) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  if (!(r > 2.0 * m))
    throw DomainError("radius " + std::to_string(r) +
                      " is not outside the horizon r > " + std::to_string(2 * m));
}

}  // namespace

double tau_closed_form(double alpha, double m, double r) {
  return tau_closed_form_derivs(alpha, m, r)[0];
}

std::array<double, 3> tau_closed_form_derivs(double alpha, double m,
                                             double r) {
  require_outside_horizon(m, r);
  double u2 = 1.0 - 2.0 * m / r;
  double u = std::sqrt(u2);
  double G = tau_integral(m, r) -
             2.0 * std::pow(2.0 * m, -3.5) / std::sqrt(r - 2.0 * m);
  // G' is exactly the original integrand h = r^{-5} (1-2m/r)^{-3/2}.
  double h = std::pow(r, -5.0) / (u2 * u);
  double hp = -5.0 * std::pow(r, -6.0) / (u2 * u) -
              3.0 * m * std::pow(r, -7.0) / (u2 * u2 * u);
  double up = m / (r * r * u);
  double upp = -2.0 * m / (r * r * r * u) - m * m / (std::pow(r, 4) * u2 * u);
  double k = alpha / 8.0;
  double tau = k * u * G;
  double taudot = k * (up * G + u * h);
  double tauddot = k * (upp * G + 2.0 * up * h + u * hp);
  return {tau, taudot, tauddot};
}

std::array<double, 5> tau_series_coefficients(double alpha, double m) {
  // Multiply the radial ODE by r^3:  2 x r taudot - 2m tau = (alpha/4) r^{-3},
  // x = r - 2m.  Matching powers of x gives
  //   tau_n = [rho_n - 2 (n-1) tau_{n-1}] / (2m (2n - 1)),
  //   rho_n = (alpha/4) (2m)^{-3} (-1)^n C(n+2, 2) (2m)^{-n}.
  std::array<double, 5> tau{};
  double tm = 2.0 * m;
  for (int n = 0; n < 5; ++n) {
    double rho = 0.25 * alpha * std::pow(tm, -3.0 - n) *
                 ((n % 2) ? -1.0 : 1.0) * 0.5 * (n + 1) * (n + 2);
    double prev = n > 0 ? 2.0 * (n - 1) * tau[n - 1] : 0.0;
    tau[n] = (rho - prev) / (tm * (2.0 * n - 1.0));
  }
  return tau;
}

TauSolution tau_ode(double alpha, double m, double r_min, double r_max,
                    int steps, double delta) {
  require_outside_horizon(m, r_min);
  if (!(r_max > r_min)) throw DomainError("empty radius range");
  if (!(delta >= 1e-6 && delta <= 1e-2))
    throw DomainError("series offset delta must lie in [1e-6, 1e-2]");
  if (steps < 2) throw DomainError("need at least 2 samples");

  const double r0 = 2.0 * m * (1.0 + delta);
  auto series = tau_series_coefficients(alpha, m);
  double x0 = r0 - 2.0 * m;
  double tau0 = 0.0;
  for (int n = 4; n >= 0; --n) tau0 = tau0 * x0 + series[n];

  // dtau/dr from the ODE away from the horizon
  auto rhs = [&](const double& tau, double& dtau, double r) {
    double w = (2.0 / r) * (1.0 - 2.0 * m / r);
    dtau = (0.25 * alpha * std::pow(r, -6.0) +
            2.0 * m * tau * std::pow(r, -3.0)) /
           w;
  };

  std::vector<double> grid;
  grid.reserve(steps + 1);
  double lo = std::max(r_min, r0);
  for (int i = 0; i < steps; ++i)
    grid.push_back(lo + (r_max - lo) * i / double(steps - 1));

  TauSolution sol;
  sol.alpha = alpha;
  sol.m = m;
  sol.provenance = TauSolution::Provenance::Ode;
  sol.tau_horizon = series[0];

  namespace odeint = boost::numeric::odeint;
  using stepper_t = odeint::runge_kutta_cash_karp54<double>;
  auto stepper = odeint::make_controlled<stepper_t>(1e-14, 1e-13);

  double tau = tau0;
  double r_cur = r0;
  for (double r_target : grid) {
    if (r_target > r_cur) {
      try {
        odeint::integrate_adaptive(stepper, rhs, tau, r_cur, r_target,
                                   (r_target - r_cur) / 64.0);
      } catch (const std::exception& e) {
        throw NumericError(std::string("ODE integration failed: ") + e.what());
      }
      r_cur = r_target;
    }
    double dtau;
    rhs(tau, dtau, r_cur);
    sol.r.push_back(r_cur);
    sol.tau.push_back(tau);
    sol.taudot.push_back(dtau);
  }
  sol.tau_inf_estimate = sol.tau.back();
  return sol;
}

TauSolution tau_closed_form_table(double alpha, double m, double r_min,
                                  double r_max, int steps) {
  require_outside_horizon(m, r_min);
  if (steps < 2) throw DomainError("need at least 2 samples");
  TauSolution sol;
  sol.alpha = alpha;
  sol.m = m;
  sol.provenance = TauSolution::Provenance::ClosedForm;
  sol.tau_horizon = -alpha / (8.0 * m * std::pow(2.0 * m, 3.0));
  for (int i = 0; i < steps; ++i) {
    double r = r_min + (r_max - r_min) * i / double(steps - 1);
    auto d = tau_closed_form_derivs(alpha, m, r);
    sol.r.push_back(r);
    sol.tau.push_back(d[0]);
    sol.taudot.push_back(d[1]);
  }
  double far = std::max(1e4 * m, 2.0 * r_max);
  sol.tau_inf_estimate = tau_closed_form(alpha, m, far);
  return sol;
}

double radial_equation_residual(double alpha, double m, double r, double tau,
                                double taudot) {
  double u = std::sqrt(1.0 - 2.0 * m / r);
  double H = 2.0 * u / r;
  double taup = u * taudot;  // d/dt = u d/dr
  return taup * H - 2.0 * m * tau * std::pow(r, -3.0) -
         0.25 * alpha * std::pow(r, -6.0);
}

double tangential_equation_residual(double alpha, double m, double r,
                                    double tau, double taudot,
                                    double tauddot) {
  double u2 = 1.0 - 2.0 * m / r;
  double u = std::sqrt(u2);
  double H = 2.0 * u / r;
  double up = m / (r * r * u);
  double taup = u * taudot;
  double taupp = u * (up * taudot + u * tauddot);
  return taupp + 0.5 * H * taup + m * tau * std::pow(r, -3.0) +
         0.5 * alpha * std::pow(r, -6.0);
}

Potential schwarzschild_rs2_potential(double alpha, double m, double c,
                                      double tau_scale) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  // tau above solves the system with coupling alpha/(2m)^2; feed it
  // (2m)^2 alpha so that (alpha, omega) is an exact pair at every mass.
  double alpha_int = alpha * 4.0 * m * m;
  std::string label = "tau+c*u(alpha=" + std::to_string(alpha) +
                      ",m=" + std::to_string(m) + ",c=" + std::to_string(c) +
                      (tau_scale != 1.0
                           ? ",tau_scale=" + std::to_string(tau_scale)
                           : "") +
                      ")";
  return Potential::radial(
      [alpha_int, m, c, tau_scale](double r) -> std::array<double, 3> {
        auto t = tau_closed_form_derivs(alpha_int, m, r);
        double u2 = 1.0 - 2.0 * m / r;
        double u = std::sqrt(u2);
        double up = m / (r * r * u);
        double upp = -2.0 * m / (r * r * r * u) -
                     m * m / (std::pow(r, 4) * u2 * u);
        return {tau_scale * t[0] + c * u, tau_scale * t[1] + c * up,
                tau_scale * t[2] + c * upp};
      },
      label);
}

MetricChart flat_torus_chart() {
  MetricChart chart(3, "flat-torus");
  for (int i = 0; i < 3; ++i) chart.set_range(i, {0.0, 2.0 * M_PI, true});
  return chart;
}

MetricChart diagonal_chart(ExprPtr g11, ExprPtr g22, ExprPtr g33) {
  MetricChart chart(3, "diagonal");
  chart.set_component(0, 0, std::move(g11));
  chart.set_component(1, 1, std::move(g22));
  chart.set_component(2, 2, std::move(g33));
  return chart;
}

MetricChart warped_chart(ExprPtr f1, ExprPtr f2) {
  MetricChart chart(3, "warped");
  // f^2 written as exp(2 log f), so a non-positive warping factor faults at
  // evaluation instead of silently flipping sign under the square.
  auto positive_sq = [](ExprPtr f) {
    return Expr::call(FuncOp::Exp,
                      ex::mul(ex::c(2.0), Expr::call(FuncOp::Log, std::move(f))));
  };
  chart.set_component(0, 0, ex::c(1.0));
  chart.set_component(1, 1, positive_sq(std::move(f1)));
  chart.set_component(2, 2, positive_sq(std::move(f2)));
  chart.set_range(0, {1e-9, 1e300, false});
  return chart;
}

MetricChart s1_invariant_chart(const MetricChart& base2d, ExprPtr f) {
  if (base2d.dim() != 2)
    throw DomainError("s1-invariant total space needs a 2-dimensional base");
  MetricChart chart(3, "s1-invariant");
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j)
      chart.set_component(i, j, base2d.component(i, j));
  chart.set_component(0, 2, ex::c(0.0));
  chart.set_component(1, 2, ex::c(0.0));
  chart.set_component(2, 2, ex::sq(std::move(f)));
  chart.params() = base2d.params();
  chart.set_range(0, base2d.range(0));
  chart.set_range(1, base2d.range(1));
  chart.set_range(2, {0.0, 2.0 * M_PI, true});
  return chart;
}

MetricChart sphere2_chart() {
  MetricChart chart(2, "round-2-sphere");
  chart.set_component(0, 0, ex::c(1.0));
  chart.set_component(1, 1, parse("sin(x1)^2"));
  chart.set_range(0, {0.0, M_PI, false});
  return chart;
}

MetricChart sphere3_chart() {
  MetricChart chart(3, "round-3-sphere");
  chart.set_component(0, 0, ex::c(1.0));
  chart.set_component(1, 1, parse("sin(x1)^2"));
  chart.set_component(2, 2, parse("sin(x1)^2 * sin(x2)^2"));
  chart.set_range(0, {0.0, M_PI, false});
  chart.set_range(1, {0.0, M_PI, false});
  return chart;
}

MetricChart polar_flat_chart() {
  MetricChart chart(3, "polar-flat");
  chart.set_component(0, 0, ex::c(1.0));
  chart.set_component(1, 1, parse("r^2"));
  chart.set_component(2, 2, ex::c(1.0));
  chart.set_range(0, {1e-9, 1e300, false});
  return chart;
}

}  // namespace curvlab
