#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "curvlab/expr.hpp"
#include "curvlab/tensors.hpp"

namespace curvlab {

using Point = std::array<double, 3>;

struct CoordRange {
  double lo = -1e300;
  double hi = 1e300;
  bool periodic = false;
};

// A coordinate-chart Riemannian metric in dimension 2 or 3: symmetric
// component expressions, late-bound parameters, and an evaluation domain.
class MetricChart {
 public:
  MetricChart() = default;
  MetricChart(int dim, std::string name) : dim_(dim), name_(std::move(name)) {
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) comp_(i, j) = ex::c(i == j ? 1.0 : 0.0);
  }

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

  void set_component(int i, int j, ExprPtr e) { comp_(i, j) = std::move(e); }
  const ExprPtr& component(int i, int j) const { return comp_(i, j); }

  ParamMap& params() { return params_; }
  const ParamMap& params() const { return params_; }

  void set_range(int axis, CoordRange r) { range_[axis] = r; }
  const CoordRange& range(int axis) const { return range_[axis]; }

  // Throws DomainError when x is outside the open chart domain.
  void check_domain(const Point& x) const;

  // Metric values at x, after the positive-definiteness check.
  Sym2d values(const Point& x) const;

  // Order-4 jets of every component at x (domain and SPD checked).
  Sym2<Jet> jets(const Point& x) const;

 private:
  int dim_ = 3;
  std::string name_;
  Sym2<ExprPtr> comp_;
  ParamMap params_;
  std::array<CoordRange, 3> range_{};
};

// SPD check used everywhere a metric value appears: all leading principal
// minors must exceed 1e-12 relative to the largest.
void require_spd(const Sym2d& g, const Point& x, const std::string& what);

}  // namespace curvlab
