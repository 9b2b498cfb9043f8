#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "curvlab/chart.hpp"
#include "curvlab/expr.hpp"
#include "curvlab/jets.hpp"

namespace curvlab::test {

// Deterministic RNG independent of libstdc++ distribution internals, so
// pinned seeds mean the same numbers everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

using ScalarFn = std::function<double(const std::array<double, 3>&)>;

// Central finite difference of order |alpha| <= 4, two Richardson levels
// (O(h^6) truncation).  The base step is chosen per derivative order; when
// `noise` is given it receives an estimate of the round-off floor of the
// stencil so callers can set honest tolerances for high orders.
double fd_partial(const ScalarFn& f, std::array<double, 3> x,
                  const std::array<int, 3>& alpha, double* noise = nullptr);
double fd_partial(const ScalarFn& f, std::array<double, 3> x,
                  const std::array<int, 3>& alpha, double h, double* noise);

// Random expression trees that stay inside every elementary function's
// domain: log/sqrt/div arguments are bounded away from trouble.
ExprPtr random_safe_expr(Rng& rng, int depth);

// Random diagonal 3-metric with trigonometric components, SPD on all of R^3.
MetricChart random_diagonal_chart(Rng& rng);

// Random point with coordinates in (0.3, 5.8).
Point random_point(Rng& rng);

// Finite-difference covariant derivative oracle: Christoffels built from
// central differences of the metric components (no jets involved), applied
// to a tensor field supplied as a callback.
struct FdGeometry {
  const MetricChart& chart;
  double h = 1e-3;

  Sym2d christoffel_corrected_derivative(
      const std::function<Sym2d(const Point&)>& field, const Point& x,
      int axis) const;
  // nabla_k T_ij by Richardson-extrapolated differences.
  Ten3d covariant_derivative(const std::function<Sym2d(const Point&)>& field,
                             const Point& x) const;
  // -g^{kl} nabla_k nabla_l T_ij
  Sym2d rough_laplacian(const std::function<Sym2d(const Point&)>& field,
                        const Point& x) const;
  Ten3d christoffels(const Point& x) const;
};

}  // namespace curvlab::test
