#pragma once

#include <vector>

#include "curvlab/chart.hpp"
#include "curvlab/functionals.hpp"

namespace curvlab {

// ---------------------------------------------------------------------------
// Kasner family: dr^2 + r^{2a1} dtheta1^2 + r^{2a2} dtheta2^2 on r > 0,
// parameterized by a in [-1, 1]; static vacuum with potential c r^{gamma}.
// ---------------------------------------------------------------------------

struct KasnerExponents {
  double alpha, beta, gamma;
};

// a = 0 and a = 1 are continuous limits of the rational formulas and are
// returned exactly: (0, 1, 0) and (0, 0, 1).
KasnerExponents kasner_exponents(double a);

MetricChart kasner_chart(double a);
Potential kasner_potential(double a, double c = 1.0);

// ---------------------------------------------------------------------------
// Schwarzschild in areal coordinates (r, phi, psi), r > 2m:
//   (1 - 2m/r)^{-1} dr^2 + r^2 (dphi^2 + sin^2 phi dpsi^2)
// ---------------------------------------------------------------------------

MetricChart schwarzschild_chart(double m);

// The static vacuum potential u = (1 - 2m/r)^{1/2}.
ExprPtr schwarzschild_u_expr();
Potential schwarzschild_vacuum_potential(double m);

// ---------------------------------------------------------------------------
// The scalar-constrained Schwarzschild potential tau.
//
// tau(r) is the a -> 2m limit of
//   (alpha/8) u(r) [ \int_a^r s^{-5} (1-2m/s)^{-3/2} ds
//                    - (1/(m a^3)) (1-2m/a)^{-1/2} ],
// evaluated stably: both divergent pieces scale as (a-2m)^{-1/2} and cancel;
// subtracting the singular model (2m)^{-7/2} (s-2m)^{-3/2} from the
// integrand and absorbing its antiderivative into the boundary term leaves
//   tau(r) = (alpha/8) u(r) [ J(r) - 2 (2m)^{-7/2} (r-2m)^{-1/2} ],
//   J(r)   = \int_0^{sqrt(r-2m)} 2 t^{-2} [ (2m+t^2)^{-7/2} - (2m)^{-7/2} ] dt,
// whose integrand is smooth (the substitution s = 2m + t^2 removes the
// square-root singularity).  tau(2m) = -alpha/(8m (2m)^3), and tau -> a
// negative constant as r -> infinity.
//
// In this normalization tau satisfies, for every m,
//   (2/r)(1 - 2m/r) dtau/dr - 2m tau r^{-3} = (alpha/4) r^{-6},
// i.e. the coupling entering the full critical-metric system at general m is
// alpha/(2m)^2; the two coincide at m = 1/2.  rs2_coupled_potential below
// applies the (2m)^2 factor so that (alpha, omega) solves the system as
// stated, for every m.
// ---------------------------------------------------------------------------

double tau_closed_form(double alpha, double m, double r);

// {tau, dtau/dr, d^2tau/dr^2} by differentiating the closed form (the
// regularized integral has the exact derivative r^{-5}(1-2m/r)^{-3/2}).
std::array<double, 3> tau_closed_form_derivs(double alpha, double m, double r);

struct TauSolution {
  double alpha = 1.0;
  double m = 0.5;
  std::vector<double> r, tau, taudot;
  double tau_horizon = 0.0;       // limit value at r -> 2m+
  double tau_inf_estimate = 0.0;  // plateau estimate from large r
  enum class Provenance { ClosedForm, Ode } provenance = Provenance::ClosedForm;
};

// Integrates the radial ODE outward from r0 = 2m(1+delta) with the interior
// series supplying the initial value, sampling `steps` points up to r_max.
TauSolution tau_ode(double alpha, double m, double r_min, double r_max,
                    int steps, double delta = 1e-4);

TauSolution tau_closed_form_table(double alpha, double m, double r_min,
                                  double r_max, int steps);

// Interior series tau = sum tau_k (r-2m)^k about the horizon (regular
// singular point); recurrence derived from the radial ODE.
std::array<double, 5> tau_series_coefficients(double alpha, double m);

// Residuals of the radial and tangential components of the critical-metric
// system along a radial profile, in the tau normalization above:
//   radial:      tau' H - 2m tau r^{-3} - (alpha/4) r^{-6}
//   tangential:  tau'' + (H/2) tau' + m tau r^{-3} + (alpha/2) r^{-6}
// with ' = d/dt (arc length), H = (2/r)(1-2m/r)^{1/2}.
double radial_equation_residual(double alpha, double m, double r, double tau,
                                double taudot);
double tangential_equation_residual(double alpha, double m, double r,
                                    double tau, double taudot,
                                    double tauddot);

// Canonical scalar-constrained potential omega = tau + c u for the
// Schwarzschild metric of mass m with coupling alpha; tau is rescaled by
// (2m)^2 so the pair (alpha, omega) satisfies the system exactly at every
// mass (homothety-consistent).  tau_scale != 1 deliberately breaks the
// solution for sensitivity tests.
Potential schwarzschild_rs2_potential(double alpha, double m, double c,
                                      double tau_scale = 1.0);

// ---------------------------------------------------------------------------
// Other named charts
// ---------------------------------------------------------------------------

MetricChart flat_torus_chart();
MetricChart diagonal_chart(ExprPtr g11, ExprPtr g22, ExprPtr g33);
// dr^2 + f1(x1)^2 dtheta1^2 + f2(x1)^2 dtheta2^2
MetricChart warped_chart(ExprPtr f1, ExprPtr f2);
// gV(x1,x2) + f(x1,x2)^2 dtheta^2, the S^1-invariant total space of a
// 2-dimensional base
MetricChart s1_invariant_chart(const MetricChart& base2d, ExprPtr f);

// Chart patches of round spheres (unit radius): s = 2 and s = 6.
MetricChart sphere2_chart();
MetricChart sphere3_chart();
// Flat metric in polar-type coordinates dr^2 + r^2 dtheta^2 + dz^2.
MetricChart polar_flat_chart();

}  // namespace curvlab
