#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/chart.hpp"
#include "curvlab/functionals.hpp"

namespace curvlab {

// Periodic grid samples of a symmetric 2-tensor on the flat 3-torus chart
// [0, 2pi)^3, N points per axis.  Used both for metrics (delta-dominated,
// SPD at every node) and for perturbation fields.  Index layout is
// lexicographic: ((i * n + j) * n + k).
class TorusField {
 public:
  TorusField() = default;
  TorusField(int n, double diagonal);

  // Evaluate a chart's component expressions at the grid nodes.  The
  // expressions must be 2pi-periodic; non-periodic samples fail the
  // aliasing guard.  SPD is checked at every node.
  static TorusField sample(const MetricChart& chart, int n);

  // Band-limited random perturbation of delta_ij: modes up to
  // min(3, n/3), peak component amplitude equal to `amplitude` (<= 0.2
  // keeps the field uniformly SPD).  Deterministic in the seed.
  static TorusField random_metric(int n, std::uint64_t seed,
                                  double amplitude = 0.1);

  // Band-limited random symmetric perturbation field (no delta part).
  static TorusField random_perturbation(int n, std::uint64_t seed,
                                        double amplitude = 0.1);

  int n() const { return n_; }
  std::int64_t nodes() const { return std::int64_t(n_) * n_ * n_; }

  double& at(int comp, std::int64_t node) { return comp_[comp][node]; }
  double at(int comp, std::int64_t node) const { return comp_[comp][node]; }
  const std::vector<double>& component(int comp) const { return comp_[comp]; }
  std::vector<double>& component(int comp) { return comp_[comp]; }

  Point node_coords(std::int64_t node) const;

  TorusField& operator+=(const TorusField& o);
  TorusField& add_scaled(const TorusField& o, double scale);
  TorusField& operator*=(double s);

  // cyclic shift by whole cells along each axis
  TorusField shifted(int di, int dj, int dk) const;

  // throws SpdError at the first failing node
  void check_spd() const;

  // Fraction of spectral energy above |k|_inf > n/3, maximized over the six
  // components; throws DomainError beyond 1e-10 when `enforce`.
  double aliasing_ratio() const;
  void check_aliasing() const;

 private:
  int n_ = 0;
  std::array<std::vector<double>, 6> comp_;
};

// Spectral (Fourier collocation) derivative of a periodic scalar field:
// returns the grid samples of d^alpha f.
std::vector<double> spectral_derivative(const std::vector<double>& field,
                                        int n, const std::array<int, 3>& alpha);

// Integral over the torus of a nodal scalar (trapezoid = exact for
// band-limited integrands); fixed lexicographic accumulation order.
double torus_integral(const std::vector<double>& field, int n);

// Pointwise scalar curvature at every node, from spectral metric
// derivatives.
std::vector<double> grid_scalar_curvature(const TorusField& g,
                                          int threads = 1);

enum class GridFunctional { R2, Z2 };

// Values of the global functionals on the sampled metric:
// R2 = int |r|^2 dV, Z2 = int |z|^2 dV, S2 = sqrt(int s^2 dV), volume, and
// the scale-invariant combination eps v^{1/3} R2 + v^{1/6} S2.
FunctionalValues functional_values(const TorusField& g, double eps = 1.0,
                                   int threads = 1);

struct GradientField {
  FunctionalValues values;
  TorusField gradient;  // pointwise Euler-Lagrange tensor
};

// Quadrature value plus the pointwise gradient field computed with spectral
// metric derivatives.  Enforces the aliasing guard on entry.
GradientField functional_and_gradient(GridFunctional f, const TorusField& g,
                                      int threads = 1);

// d/dt F(g + t h) at t = 0 by Richardson-extrapolated central differences
// against the L^2 pairing of the gradient with h.
struct VariationCheck {
  double fd_derivative;
  double pairing;
  double kappa;  // fd / pairing
};
VariationCheck first_variation_check(GridFunctional f, const TorusField& g,
                                     const TorusField& h, double t0 = 1e-3,
                                     int threads = 1);

// int <a, b>_g dV over the grid.
double l2_pairing(const TorusField& g, const TorusField& a,
                  const TorusField& b, int threads = 1);

// One explicit descent step g <- g - dt * grad F; SPD is re-checked and a
// failure names the node.
TorusField flow_step(const TorusField& g, GridFunctional f, double dt,
                     int threads = 1);

struct FlowTraceRow {
  int step;
  double value;
  double max_gradient;
};

struct FlowTrace {
  std::vector<FlowTraceRow> rows;
  bool ok = true;
  std::string failure;  // SPD loss or functional increase diagnostics
};

// Runs `steps` explicit steps, recording the functional value before each
// step and after the last; stops with ok = false on SPD loss or increase.
FlowTrace flow_run(const TorusField& g0, GridFunctional f, double dt,
                   int steps, int threads = 1);

}  // namespace curvlab
