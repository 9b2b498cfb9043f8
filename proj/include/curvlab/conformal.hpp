#pragma once

#include "curvlab/functionals.hpp"
#include "curvlab/geometry.hpp"

namespace curvlab {

// A base metric with a pointwise-positive conformal factor phi and the
// scaled chart phi * g built at the expression level.
struct ConformalPair {
  MetricChart base;
  ExprPtr phi;
  MetricChart scaled;  // components phi * g_ij
};

ConformalPair make_conformal_pair(const MetricChart& base, ExprPtr phi);

// Scalar curvature of phi * g two ways: direct curvature of the scaled
// chart, and the dimension-3 law phi^{-1}(s - 2 Delta log phi
// - 1/2 |nabla log phi|^2) with every right-side quantity w.r.t. g.
struct ScalarPair {
  double direct;
  double formula;
};
ScalarPair conformal_scalar(const ConformalPair& pair, const Point& x);

// Ricci of u^2 g two ways: direct, and
// r - u^{-1} D^2 u - u^{-1} (Delta u) g + 2 (d log u)^2.
struct RicciPair {
  Sym2d direct;
  Sym2d formula;
};
RicciPair conformal_ricci(const MetricChart& g, const Expr& u, const Point& x);

// Gauss curvature of f^2 gV on a surface: direct (s/2 of the scaled chart)
// and f^{-2}(K - Delta log f).
ScalarPair gauss_conformal_2d(const MetricChart& base2d, const Expr& f,
                              const Point& x);

// Scalar curvatures of an S^1-invariant total space g = gV + f^2 dtheta^2
// and its base, linked by s_V = s + |A|^2 + 2|H|^2 + 2 Delta log f with
// |H|^2 = |nabla log f|^2.  The horizontal distribution of a warped product
// is integrable, so the |A|^2 slot is identically zero; it is kept in the
// result so non-integrable extensions change no signatures.
struct SubmersionScalars {
  double lhs;        // s_V from the 2-dimensional pipeline
  double rhs;        // s(g) + |A|^2 + 2 |H|^2 + 2 Delta_V log f
  double s_total;    // s(g), 3-dimensional pipeline
  double h_norm2;    // |nabla log f|^2 w.r.t. gV
  double a_norm2;    // 0: integrable horizontal distribution
  double lap_log_f;  // Delta_V log f
};
SubmersionScalars submersion_scalar(const MetricChart& base2d, const Expr& f,
                                    const Point& x);

}  // namespace curvlab
