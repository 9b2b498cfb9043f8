#include "curvlab/chart.hpp"

#include <cmath>
#include <sstream>

namespace curvlab {

namespace {
std::string point_str(const Point& x, int dim) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}
}  // namespace

void require_spd(const Sym2d& g, const Point& x, const std::string& what) {
  auto minors = principal_minors(g);
  double largest = 0.0;
  for (int k = 0; k < g.dim; ++k) largest = std::max(largest, std::abs(minors[k]));
  if (largest == 0.0) throw SpdError(what + ": zero metric at " + point_str(x, g.dim));
  for (int k = 0; k < g.dim; ++k) {
    if (minors[k] <= 1e-12 * largest)
      throw SpdError(what + ": metric not positive definite at " +
                     point_str(x, g.dim) + " (principal minor " +
                     std::to_string(k + 1) + " = " + std::to_string(minors[k]) + ")");
  }
}

void MetricChart::check_domain(const Point& x) const {
  for (int i = 0; i < dim_; ++i) {
    const CoordRange& r = range_[i];
    if (r.periodic) continue;
    if (!(x[i] > r.lo && x[i] < r.hi))
      throw DomainError(name_ + ": coordinate " + std::to_string(i + 1) + " = " +
                        std::to_string(x[i]) + " outside the chart domain (" +
                        std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")");
  }
}

Sym2d MetricChart::values(const Point& x) const {
  check_domain(x);
  Sym2d g(dim_);
  std::span<const double> xs(x.data(), dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) g(i, j) = eval(*comp_(i, j), xs, params_);
  require_spd(g, x, name_);
  return g;
}

Sym2<Jet> MetricChart::jets(const Point& x) const {
  check_domain(x);
  Sym2<Jet> g(dim_);
  std::span<const double> xs(x.data(), dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      g(i, j) = eval_jet(*comp_(i, j), xs, dim_, params_);
  Sym2d vals(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) vals(i, j) = g(i, j).value();
  require_spd(vals, x, name_);
  return g;
}

}  // namespace curvlab
