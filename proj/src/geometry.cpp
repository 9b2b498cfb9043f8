#include "curvlab/geometry.hpp"

#include <cmath>

namespace curvlab {

namespace {

// Inverse of a symmetric jet matrix via the adjugate.
Sym2<Jet> invert(const Sym2<Jet>& g, Jet* det_out) {
  const int dim = g.dim;
  Sym2<Jet> inv(dim);
  if (dim == 2) {
    Jet det = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    inv(0, 0) = g(1, 1) / det;
    inv(1, 1) = g(0, 0) / det;
    inv(0, 1) = -g(0, 1) / det;
    if (det_out) *det_out = det;
    return inv;
  }
  Jet c00 = g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2);
  Jet c01 = g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2);
  Jet c02 = g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1);
  Jet det = g(0, 0) * c00 + g(0, 1) * c01 + g(0, 2) * c02;
  inv(0, 0) = c00 / det;
  inv(0, 1) = c01 / det;
  inv(0, 2) = c02 / det;
  inv(1, 1) = (g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2)) / det;
  inv(1, 2) = (g(0, 1) * g(0, 2) - g(0, 0) * g(1, 2)) / det;
  inv(2, 2) = (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1)) / det;
  if (det_out) *det_out = det;
  return inv;
}

Sym2d values_of(const Sym2<Jet>& t) {
  Sym2d v(t.dim);
  for (int i = 0; i < t.dim; ++i)
    for (int j = i; j < t.dim; ++j) v(i, j) = t(i, j).value();
  return v;
}

}  // namespace

JetGeometry build_geometry(const Sym2<Jet>& metric_jets) {
  JetGeometry geo;
  const int dim = metric_jets.dim;
  geo.dim = dim;
  geo.g = metric_jets;

  // Each stage of the chain gamma -> Riemann -> Ricci loses one derivative
  // order; capping the jet algebra at the order a stage can still deliver
  // exactly skips dead coefficient work.
  {
    JetTruncationGuard order3(3);
    geo.ginv = invert(geo.g, &geo.det);

    // dg[k][i][j] = d_k g_ij -- valid to order 3
    Jet dg[3][6];
    for (int k = 0; k < dim; ++k)
      for (int s = 0; s < 6; ++s) dg[k][s] = geo.g.v[s].derivative(k);
    auto dgk = [&](int k, int i, int j) -> const Jet& {
      return dg[k][Sym2d::slot(i, j)];
    };

    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
          Jet acc(dim);
          for (int l = 0; l < dim; ++l)
            acc +=
                geo.ginv(k, l) * (dgk(i, j, l) + dgk(j, i, l) - dgk(l, i, j));
          acc *= 0.5;
          geo.gamma[k][i][j] = acc;
          geo.gamma[k][j][i] = acc;
        }
  }

  // R^m_ijl = d_i G^m_jl - d_j G^m_il + G^m_ip G^p_jl - G^m_jp G^p_il,
  // then lower: Rm_ijkl = g_km R^m_ijl.  Valid to order 2.
  JetTruncationGuard order2(2);
  Jet rup[3][3][3][3];  // rup[m][i][j][l], antisymmetric in (i, j)
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        for (int l = 0; l < dim; ++l) {
          Jet acc = geo.gamma[m][j][l].derivative(i) -
                    geo.gamma[m][i][l].derivative(j);
          for (int p = 0; p < dim; ++p)
            acc += geo.gamma[m][i][p] * geo.gamma[p][j][l] -
                   geo.gamma[m][j][p] * geo.gamma[p][i][l];
          rup[m][i][j][l] = acc;
          rup[m][j][i][l] = -acc;
        }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          if (i == j) {
            geo.rm[i][j][k][l] = Jet(dim);
            continue;
          }
          if (i > j) {
            geo.rm[i][j][k][l] = -geo.rm[j][i][k][l];
            continue;
          }
          Jet acc(dim);
          for (int m = 0; m < dim; ++m)
            acc += geo.g(k, m) * rup[m][i][j][l];
          geo.rm[i][j][k][l] = acc;
        }

  // r_kl = g^{ij} Rm_ikjl
  geo.ricci = Sym2<Jet>(dim);
  for (int k = 0; k < dim; ++k)
    for (int l = k; l < dim; ++l) {
      Jet acc(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          acc += geo.ginv(i, j) * geo.rm[i][k][j][l];
      geo.ricci(k, l) = acc;
    }

  geo.s = Jet(dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l)
      geo.s += geo.ginv(k, l) * geo.ricci(k, l);

  geo.z = Sym2<Jet>(dim);
  if (dim == 3) {
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        geo.z(i, j) = geo.ricci(i, j) - (1.0 / 3.0) * (geo.s * geo.g(i, j));
  }
  return geo;
}

JetGeometry build_geometry(const MetricChart& chart, const Point& x) {
  return build_geometry(chart.jets(x));
}

void covariant_derivative(const JetGeometry& geo, const Sym2<Jet>& t,
                          Jet out[3][3][3]) {
  const int dim = geo.dim;
  // inputs are valid to order 2 at most, so the result is valid to order 1
  JetTruncationGuard order1(1);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        if (j < i) {
          out[k][i][j] = out[k][j][i];
          continue;
        }
        Jet acc = t(i, j).derivative(k);
        for (int m = 0; m < dim; ++m)
          acc -= geo.gamma[m][k][i] * t(m, j) + geo.gamma[m][k][j] * t(i, m);
        out[k][i][j] = acc;
      }
}

void second_covariant_derivative(const JetGeometry& geo, const Sym2<Jet>& t,
                                 double out[3][3][3][3]) {
  const int dim = geo.dim;
  Jet nt[3][3][3];
  covariant_derivative(geo, t, nt);
  for (int l = 0; l < dim; ++l)
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double acc = nt[k][i][j].derivative(l).value();
          for (int m = 0; m < dim; ++m) {
            double gl = 0.0;
            gl += geo.gamma[m][l][k].value() * nt[m][i][j].value();
            gl += geo.gamma[m][l][i].value() * nt[k][m][j].value();
            gl += geo.gamma[m][l][j].value() * nt[k][i][m].value();
            acc -= gl;
          }
          out[l][k][i][j] = acc;
        }
}

Sym2d rough_laplacian(const JetGeometry& geo, const Sym2<Jet>& t) {
  const int dim = geo.dim;
  double d2[3][3][3][3];
  second_covariant_derivative(geo, t, d2);
  Sym2d r(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
          acc += geo.ginv(k, l).value() * d2[k][l][i][j];
      r(i, j) = -acc;
    }
  return r;
}

Vec3d divergence(const JetGeometry& geo, const Sym2<Jet>& t) {
  const int dim = geo.dim;
  Jet nt[3][3][3];
  covariant_derivative(geo, t, nt);
  Vec3d r{};
  for (int j = 0; j < dim; ++j) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k)
        acc += geo.ginv(i, k).value() * nt[i][k][j].value();
    r[j] = -acc;
  }
  return r;
}

Sym2d hessian(const JetGeometry& geo, const Jet& f) {
  const int dim = geo.dim;
  Sym2d h(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double acc = f.deriv((i == 0) + (j == 0), (i == 1) + (j == 1),
                           (i == 2) + (j == 2));
      for (int k = 0; k < dim; ++k)
        acc -= geo.gamma[k][i][j].value() *
               f.deriv(k == 0, k == 1, k == 2);
      h(i, j) = acc;
    }
  return h;
}

double laplacian(const JetGeometry& geo, const Jet& f) {
  Sym2d h = hessian(geo, f);
  Sym2d ginv = values_of(geo.ginv);
  return trace(ginv, h);
}

Sym2d curvature_action(const CurvaturePack& pack, const Sym2d& h) {
  const int dim = pack.dim;
  // raise both indices of h first
  double hup[3][3] = {};
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      double acc = 0.0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          acc += pack.ginv(k, a) * pack.ginv(l, b) * h(a, b);
      hup[k][l] = acc;
    }
  Sym2d r(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
          acc += pack.riemann[i][k][j][l] * hup[k][l];
      r(i, j) = acc;
    }
  return r;
}

Sym2d curvature_action(const JetGeometry& geo, const Sym2d& h) {
  const int dim = geo.dim;
  double hup[3][3] = {};
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      double acc = 0.0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          acc += geo.ginv(k, a).value() * geo.ginv(l, b).value() * h(a, b);
      hup[k][l] = acc;
    }
  Sym2d r(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
          acc += geo.rm[i][k][j][l].value() * hup[k][l];
      r(i, j) = acc;
    }
  return r;
}

Ten3d cotton_closedness(const JetGeometry& geo) {
  const int dim = geo.dim;
  Sym2<Jet> schouten(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      schouten(i, j) = geo.ricci(i, j) - 0.25 * (geo.s * geo.g(i, j));
  Jet ns[3][3][3];
  covariant_derivative(geo, schouten, ns);
  Ten3d c{};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        c[i][j][k] = ns[k][i][j].value() - ns[j][i][k].value();
  return c;
}

CurvaturePack curvature(const JetGeometry& geo, Depth depth) {
  CurvaturePack pack;
  const int dim = geo.dim;
  pack.dim = dim;
  pack.g = values_of(geo.g);
  pack.ginv = values_of(geo.ginv);
  pack.det = geo.det.value();
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        pack.gamma[k][i][j] = geo.gamma[k][i][j].value();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
          pack.riemann[i][j][k][l] = geo.rm[i][j][k][l].value();
  pack.ricci = values_of(geo.ricci);
  pack.s = geo.s.value();
  pack.z = values_of(geo.z);
  pack.norm_r2 = inner(pack.ginv, pack.ricci, pack.ricci);
  pack.norm_z2 = dim == 3 ? inner(pack.ginv, pack.z, pack.z) : 0.0;

  if (depth == Depth::FourthOrder) {
    pack.fourth = true;
    for (int i = 0; i < dim; ++i)
      pack.grad_s[i] = geo.s.deriv(i == 0, i == 1, i == 2);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        pack.norm_grad_s2 += pack.ginv(i, j) * pack.grad_s[i] * pack.grad_s[j];
    pack.hess_s = hessian(geo, geo.s);
    pack.lap_s = trace(pack.ginv, pack.hess_s);
    Jet nr[3][3][3];
    covariant_derivative(geo, geo.ricci, nr);
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          pack.grad_ricci[k][i][j] = nr[k][i][j].value();
    pack.rough_ricci = rough_laplacian(geo, geo.ricci);
    if (dim == 3) pack.rough_z = rough_laplacian(geo, geo.z);
  }
  return pack;
}

CurvaturePack curvature(const MetricChart& chart, const Point& x, Depth depth) {
  return curvature(build_geometry(chart, x), depth);
}

std::pair<Sym2d, double> hessian_laplacian(const MetricChart& chart,
                                           const Expr& f, const Point& x) {
  JetGeometry geo = build_geometry(chart, x);
  std::span<const double> xs(x.data(), chart.dim());
  Jet fj = eval_jet(f, xs, chart.dim(), chart.params());
  Sym2d h = hessian(geo, fj);
  Sym2d ginv = values_of(geo.ginv);
  return {h, trace(ginv, h)};
}

Sym2d rough_laplacian_sym2(const MetricChart& chart, InternalField field,
                           const Point& x) {
  JetGeometry geo = build_geometry(chart, x);
  return rough_laplacian(geo,
                         field == InternalField::Ricci ? geo.ricci : geo.z);
}

Vec3d divergence_sym2(const MetricChart& chart, InternalField field,
                      const Point& x) {
  JetGeometry geo = build_geometry(chart, x);
  return divergence(geo, field == InternalField::Ricci ? geo.ricci : geo.z);
}

Ten3d cotton_closedness(const MetricChart& chart, const Point& x) {
  return cotton_closedness(build_geometry(chart, x));
}

}  // namespace curvlab
