#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/geometry.hpp"

namespace curvlab {

// A potential function omega, queryable as an order->=2 jet at a chart point.
// Either a parsed expression or an analytic radial profile (value and two
// r-derivatives), the latter used for quadrature-defined potentials.
class Potential {
 public:
  using RadialFn = std::function<std::array<double, 3>(double r)>;

  Potential() = default;
  static Potential expression(ExprPtr e, ParamMap params = {});
  // omega = omega(x1); fn returns {omega, d omega/dr, d^2 omega/dr^2}.
  static Potential radial(RadialFn fn, std::string label);

  bool valid() const { return kind_ != Kind::None; }
  bool zero_expression() const;
  const std::string& label() const { return label_; }

  Jet jet_at(const Point& x, int dim) const;
  double value_at(const Point& x, int dim) const;

 private:
  enum class Kind { None, Expression, Radial };
  Kind kind_ = Kind::None;
  ExprPtr expr_;
  ParamMap params_;
  RadialFn radial_;
  std::string label_;
};

// omega and the coupling alpha >= 0 of the scalar-constrained systems.
// alpha = 0 is the static vacuum case and requires a nonzero omega.
struct PotentialSpec {
  Potential omega;
  double alpha = 0.0;
};

// ---------------------------------------------------------------------------
// Euler-Lagrange tensors (conventions in geometry.hpp)
// ---------------------------------------------------------------------------

// Gradient of the integral of |r|^2:
//   D*Dr + D^2 s - 2 Ro r - 1/2 (Delta s - |r|^2) g.
Sym2d gradient_r2(const JetGeometry& geo);

// Gradient of the integral of |z|^2:
//   D*Dz + 1/3 D^2 s - 2 Ro z + 1/2 (|z|^2 - 1/3 Delta s) g.
Sym2d gradient_z2(const JetGeometry& geo);

// L* f = D^2 f - (Delta f) g - f r, the adjoint of the linearized scalar
// curvature.
Sym2d l_star(const JetGeometry& geo, const Jet& f);

// Weitzenbock form of the |r|^2 gradient:
//   1/2 delta(dr) + 1/2 D^2 s - r o r - Ro r - 1/2 Delta s g + 1/2 |r|^2 g,
// with (dr)_kij = nabla_k r_ij - nabla_i r_kj and delta contracting the
// antisymmetric slot.  Agrees with the conformally flat short form where
// dr = 0; equality with gradient_r2 on general metrics is an experiment,
// not a contract (see weitzenbock_defect).
Sym2d gradient_r2_weitzenbock(const JetGeometry& geo);

// Short form valid on conformally flat scalar-flat metrics:
//   -r o r - Ro r + 1/2 |r|^2 g.
Sym2d gradient_r2_conformally_flat(const JetGeometry& geo);

// max-norm of gradient_r2_weitzenbock - gradient_r2 (the flagged experiment).
double weitzenbock_defect(const JetGeometry& geo);

// Chart-level wrappers.
Sym2d gradient_r2(const MetricChart& chart, const Point& x);
Sym2d gradient_z2(const MetricChart& chart, const Point& x);
Sym2d l_star(const MetricChart& chart, const Expr& f, const Point& x);
Sym2d gradient_r2_weitzenbock(const MetricChart& chart, const Point& x);

// ---------------------------------------------------------------------------
// Equation-system residuals
// ---------------------------------------------------------------------------

enum class EqSystem { R2, R2s, Z2s, Vacuum };

const char* system_name(EqSystem s);
EqSystem system_from_name(const std::string& name);

struct ResidualRow {
  Point x{};
  double full_residual = 0.0;   // frame-invariant max |eigenvalue|
  double trace_residual = 0.0;  // independently evaluated trace equation
  double norm_r2 = 0.0;
  double s = 0.0;
  std::optional<double> omega;
  bool pass = false;
};

struct ResidualReport {
  EqSystem system = EqSystem::R2;
  double tol = 0.0;
  std::vector<ResidualRow> rows;
  double max_full = 0.0;
  double max_trace = 0.0;
  bool pass = false;
};

// Evaluates the named system at the sample points.  The full tensor equation
// and its trace equation are computed independently of each other; R2s
// additionally requires |s| <= tol pointwise (scalar-flat constraint).
ResidualReport residual(EqSystem system, const MetricChart& chart,
                        const std::optional<PotentialSpec>& pot,
                        const std::vector<Point>& points, double tol);

// ---------------------------------------------------------------------------
// Global functional values on a closed grid (quadrature supplied by caller)
// ---------------------------------------------------------------------------

struct FunctionalValues {
  double r2 = 0.0;      // integral of |r|^2 dV
  double z2 = 0.0;      // integral of |z|^2 dV
  double s2 = 0.0;      // sqrt(integral of s^2 dV)
  double volume = 0.0;
  double i_eps = 0.0;   // eps v^{1/3} R2 + v^{1/6} S2
};

FunctionalValues assemble_functionals(double r2_integral, double z2_integral,
                                      double s2_integral, double volume,
                                      double eps);

}  // namespace curvlab
