#pragma once

#include "curvlab/chart.hpp"
#include "curvlab/jets.hpp"
#include "curvlab/tensors.hpp"

namespace curvlab {

// How much derivative data a curvature query carries.  Second order covers
// curvature display and the operators built from D^2 f; fourth order is
// required by the rough Laplacian of Ricci and the Hessian of s.
enum class Depth { SecondOrder, FourthOrder };

// Sign conventions, binding for every module in this project:
//   * round 2-sphere of radius 1 has s = 2; unit 3-sphere has s = 6
//   * Delta = tr_g D^2 (Delta of a convex function is positive)
//   * D*D = -g^{kl} nabla_k nabla_l, the positive rough Laplacian
//   * delta = -div on symmetric 2-tensors: (delta T)_j = -g^{ik} nabla_i T_kj
//   * (Ro h)_ij = R_ikjl h^{kl}, normalized so tr_g(Ro h) = <r, h>
// All-lower Riemann: Rm(X,Y,Z,W) = <R(X,Y)W, Z> with
// R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].

// Jet-level geometry of a metric at one point.  Validity orders: g and ginv
// are exact to order 4, the Christoffels to order 3, Riemann/Ricci/s/z to
// order 2.  Everything downstream consumes coefficients inside those ranges.
struct JetGeometry {
  int dim = 3;
  Sym2<Jet> g, ginv;
  Jet det;
  Jet gamma[3][3][3];  // gamma[k][i][j], symmetric in (i, j)
  Jet rm[3][3][3][3];  // all-lower Riemann
  Sym2<Jet> ricci;
  Jet s;
  Sym2<Jet> z;  // traceless Ricci (dim 3)
};

JetGeometry build_geometry(const Sym2<Jet>& metric_jets);
JetGeometry build_geometry(const MetricChart& chart, const Point& x);

// All pointwise curvature data extracted as plain values.
struct CurvaturePack {
  int dim = 3;
  Sym2d g, ginv;
  double det = 0;
  Ten3d gamma{};
  double riemann[3][3][3][3] = {};
  Sym2d ricci, z;
  double s = 0;
  double norm_r2 = 0, norm_z2 = 0;

  bool fourth = false;
  Vec3d grad_s{};
  double norm_grad_s2 = 0;
  Sym2d hess_s;
  double lap_s = 0;
  Ten3d grad_ricci{};        // nabla_k r_ij
  Sym2d rough_ricci, rough_z;  // D*Dr, D*Dz
};

CurvaturePack curvature(const JetGeometry& geo, Depth depth);
CurvaturePack curvature(const MetricChart& chart, const Point& x, Depth depth);

// Covariant derivative of a symmetric 2-tensor of jets: (nabla T)_kij.
// Result jets are valid one order below the inputs.
void covariant_derivative(const JetGeometry& geo, const Sym2<Jet>& t,
                          Jet out[3][3][3]);

// Value-level second covariant derivative nabla_l nabla_k T_ij.
void second_covariant_derivative(const JetGeometry& geo, const Sym2<Jet>& t,
                                 double out[3][3][3][3]);

// (D*DT)_ij = -g^{kl} nabla_k nabla_l T_ij.
Sym2d rough_laplacian(const JetGeometry& geo, const Sym2<Jet>& t);

// (delta T)_j = -g^{ik} nabla_i T_kj.
Vec3d divergence(const JetGeometry& geo, const Sym2<Jet>& t);

// Covariant Hessian and Laplacian of a scalar carried as a jet (valid to
// order >= 2 at the point).
Sym2d hessian(const JetGeometry& geo, const Jet& f);
double laplacian(const JetGeometry& geo, const Jet& f);

// (Ro h)_ij = R_ikjl h^{kl}.
Sym2d curvature_action(const CurvaturePack& pack, const Sym2d& h);
Sym2d curvature_action(const JetGeometry& geo, const Sym2d& h);

// Cotton-type 3-tensor C_ijk = nabla_k S_ij - nabla_j S_ik for
// S = r - (s/4) g; vanishes exactly on conformally flat 3-metrics.
Ten3d cotton_closedness(const JetGeometry& geo);

// Chart-level conveniences.
enum class InternalField { Ricci, TracelessRicci };

std::pair<Sym2d, double> hessian_laplacian(const MetricChart& chart,
                                           const Expr& f, const Point& x);
Sym2d rough_laplacian_sym2(const MetricChart& chart, InternalField field,
                           const Point& x);
Vec3d divergence_sym2(const MetricChart& chart, InternalField field,
                      const Point& x);
Ten3d cotton_closedness(const MetricChart& chart, const Point& x);

}  // namespace curvlab
