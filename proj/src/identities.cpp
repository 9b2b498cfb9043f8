#include "curvlab/identities.hpp"

#include <cmath>

#include "curvlab/conformal.hpp"
#include "curvlab/exact_solutions.hpp"
#include "curvlab/functionals.hpp"
#include "curvlab/geometry.hpp"

namespace curvlab {

double DetRng::uniform() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return double(z >> 11) * 0x1.0p-53;
}

int DetRng::uniform_int(int lo, int hi) {
  return lo + int(uniform() * (hi - lo + 1));
}

MetricChart random_diagonal_metric(DetRng& rng) {
  MetricChart chart(3, "random-diagonal");
  for (int i = 0; i < 3; ++i) {
    ExprPtr e = ex::c(1.0 + rng.uniform(0.0, 0.5));
    for (int k = 0; k < 2; ++k) {
      int axis = rng.uniform_int(0, 2);
      double amp = rng.uniform(0.04, 0.14);
      double freq = rng.uniform_int(1, 2);
      double phase = rng.uniform(0.0, 6.28);
      auto wave = Expr::call(rng.uniform_int(0, 1) ? FuncOp::Sin : FuncOp::Cos,
                             ex::add(ex::mul(ex::c(freq), ex::x(axis)),
                                     ex::c(phase)));
      e = ex::add(std::move(e), ex::mul(ex::c(amp), std::move(wave)));
    }
    chart.set_component(i, i, std::move(e));
  }
  return chart;
}

Point random_sample_point(DetRng& rng) {
  return {rng.uniform(0.3, 5.8), rng.uniform(0.3, 5.8), rng.uniform(0.3, 5.8)};
}

namespace {

struct Battery {
  std::vector<IdentityRow> rows;

  Battery() { rows.reserve(64); }

  // references returned here must stay valid across later row() calls
  IdentityRow& row(const std::string& name, double tol) {
    if (rows.size() == rows.capacity())
      throw Error("identity battery exceeded its reserved row count");
    rows.push_back({name, 0.0, tol, 0, false});
    return rows.back();
  }
};

void feed(IdentityRow& row, double err) {
  row.max_err = std::max(row.max_err, std::abs(err));
  ++row.samples;
}

void finish(Battery& b) {
  for (auto& r : b.rows) r.pass = r.max_err <= r.tol;
}

double max_ten3(const Ten3d& t) {
  double m = 0.0;
  for (auto& a : t)
    for (auto& b : a)
      for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::vector<IdentityRow> identity_battery(std::uint64_t seed) {
  Battery b;
  DetRng rng(seed);

  IdentityRow& tr_r2 = b.row("trace grad R2 = -3/2 lap(s) - 1/2 |r|^2", 1e-8);
  IdentityRow& tr_z2 = b.row("trace grad Z2 = -1/6 lap(s) - 1/2 |z|^2", 1e-8);
  IdentityRow& tr_ls = b.row("trace L*f = -2 lap(f) - f s", 1e-8);
  IdentityRow& div_r = b.row("div Bianchi: delta r = -1/2 ds", 1e-8);
  IdentityRow& div_z = b.row("div Bianchi: delta z = -1/6 ds", 1e-8);
  IdentityRow& decomp = b.row("|r|^2 = |z|^2 + s^2/3", 1e-12);
  IdentityRow& rsym = b.row("Riemann symmetries + first Bianchi", 1e-10);
  IdentityRow& tr_rough = b.row("trace D*Dr = -lap(s)", 1e-8);
  IdentityRow& scaling = b.row("pointwise scaling laws", 1e-10);

  ExprPtr test_fn = parse("sin(x1) + 0.3*cos(x2 + x3)");
  for (int trial = 0; trial < 20; ++trial) {
    MetricChart chart = random_diagonal_metric(rng);
    Point x = random_sample_point(rng);
    JetGeometry geo = build_geometry(chart, x);
    CurvaturePack p = curvature(geo, Depth::FourthOrder);

    feed(tr_r2, trace(p.ginv, gradient_r2(geo)) -
                    (-1.5 * p.lap_s - 0.5 * p.norm_r2));
    feed(tr_z2, trace(p.ginv, gradient_z2(geo)) -
                    (-p.lap_s / 6.0 - 0.5 * p.norm_z2));

    Jet f = eval_jet(*test_fn, std::span<const double>(x.data(), 3), 3, {});
    feed(tr_ls, trace(p.ginv, l_star(geo, f)) -
                    (-2.0 * laplacian(geo, f) - f.value() * p.s));

    Vec3d dr = divergence(geo, geo.ricci);
    Vec3d dz = divergence(geo, geo.z);
    for (int j = 0; j < 3; ++j) {
      feed(div_r, dr[j] + 0.5 * p.grad_s[j]);
      feed(div_z, dz[j] + p.grad_s[j] / 6.0);
    }

    feed(decomp, p.norm_r2 - p.norm_z2 - p.s * p.s / 3.0);

    double scale = 1e-6;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            scale = std::max(scale, std::abs(p.riemann[i][j][k][l]));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            double r = p.riemann[i][j][k][l];
            feed(rsym, (r + p.riemann[j][i][k][l]) / scale);
            feed(rsym, (r - p.riemann[k][l][i][j]) / scale);
            feed(rsym, (p.riemann[i][j][k][l] + p.riemann[j][l][k][i] +
                        p.riemann[l][i][k][j]) /
                           scale);
          }

    Sym2d rough = rough_laplacian(geo, geo.ricci);
    feed(tr_rough, trace(p.ginv, rough) + p.lap_s);

    if (trial < 5) {
      for (double lambda : {0.5, 2.0, 10.0}) {
        MetricChart scaled = chart;
        for (int i = 0; i < 3; ++i)
          scaled.set_component(
              i, i, ex::mul(ex::c(lambda * lambda), chart.component(i, i)));
        CurvaturePack q = curvature(scaled, x, Depth::SecondOrder);
        double denom = std::max(1e-6, std::abs(p.s));
        feed(scaling, (q.s - p.s / (lambda * lambda)) / denom);
        feed(scaling, (q.norm_r2 - p.norm_r2 / std::pow(lambda, 4)) /
                          std::max(1e-6, p.norm_r2));
        for (int i = 0; i < 3; ++i)
          feed(scaling, (q.ricci(i, i) - p.ricci(i, i)) /
                            std::max(1e-6, std::abs(p.ricci(i, i))));
      }
    }
  }

  // Schwarzschild block: conformal flatness, vacuum potential, short form
  IdentityRow& cotton = b.row("Cotton tensor of spherical symmetry", 1e-9);
  IdentityRow& wb = b.row("Weitzenbock short form = full gradient", 1e-8);
  IdentityRow& vac = b.row("Schwarzschild: L*u = 0, lap(u) = 0", 1e-9);
  {
    MetricChart sch = schwarzschild_chart(0.5);
    ExprPtr u = schwarzschild_u_expr();
    for (double r : {1.5, 3.0}) {
      Point x{r, 1.2, 0.6};
      JetGeometry geo = build_geometry(sch, x);
      feed(cotton, max_ten3(cotton_closedness(geo)));
      feed(wb, max_abs_component(gradient_r2_conformally_flat(geo) -
                                 gradient_r2(geo)));
      Jet uj = eval_jet(*u, std::span<const double>(x.data(), 3), 3,
                        sch.params());
      feed(vac, max_abs_component(l_star(geo, uj)));
      feed(vac, laplacian(geo, uj));
    }
  }

  // conformal laws
  IdentityRow& csc = b.row("conformal scalar law (dim 3)", 1e-8);
  IdentityRow& cric = b.row("conformal Ricci law u^2 g", 1e-8);
  IdentityRow& gauss = b.row("conformal Gauss curvature (dim 2)", 1e-9);
  IdentityRow& merge = b.row("warped-product scalar identity", 1e-8);
  IdentityRow& comp = b.row("conformal factors compose", 1e-8);
  {
    ExprPtr phi = parse("1 + 0.3*sin(x1)");
    ExprPtr uexp = parse("exp(0.2*cos(x2))");
    for (int trial = 0; trial < 10; ++trial) {
      MetricChart g = random_diagonal_metric(rng);
      Point x = random_sample_point(rng);
      ConformalPair pair = make_conformal_pair(g, phi);
      ScalarPair sp = conformal_scalar(pair, x);
      feed(csc, sp.direct - sp.formula);

      RicciPair rp = conformal_ricci(g, *uexp, x);
      feed(cric, max_abs_component(rp.direct - rp.formula));

      ConformalPair once = make_conformal_pair(g, ex::mul(phi, uexp));
      ConformalPair twice = make_conformal_pair(
          make_conformal_pair(g, phi).scaled, uexp);
      feed(comp, conformal_scalar(once, x).direct -
                     conformal_scalar(twice, x).direct);
    }

    MetricChart flat2(2, "flat-2-torus");
    MetricChart curved(2, "curved-base");
    curved.set_component(0, 0, parse("1 + 0.2*cos(x2)"));
    curved.set_component(1, 1, ex::c(1.0));
    ExprPtr fexp = parse("exp(0.1*sin(x1))");
    ExprPtr fmix = parse("1 + 0.1*sin(x1 + x2)");
    for (int trial = 0; trial < 10; ++trial) {
      Point x{rng.uniform(0.0, 6.2), rng.uniform(0.0, 6.2), 0.0};
      ScalarPair gp = gauss_conformal_2d(flat2, *fexp, x);
      feed(gauss, gp.direct - gp.formula);
      SubmersionScalars sc = submersion_scalar(curved, *fmix, x);
      feed(merge, sc.lhs - sc.rhs);
    }
  }

  // Kasner exponents
  IdentityRow& kas = b.row("Kasner exponent identities", 1e-12);
  for (int k = -10; k <= 10; ++k) {
    auto e = kasner_exponents(k / 10.0);
    feed(kas, e.alpha + e.beta + e.gamma - 1.0);
    feed(kas, e.alpha * e.alpha + e.beta * e.beta + e.gamma * e.gamma - 1.0);
  }

  IdentityRow& kvac = b.row("Kasner static vacuum residuals", 1e-7);
  for (double a : {-1.0, -0.5, 0.5}) {
    MetricChart kchart = kasner_chart(a);
    PotentialSpec pot{kasner_potential(a), 0.0};
    std::vector<Point> pts{{0.5, 0.3, 0.9}, {1.0, 2.0, 0.1}, {3.0, 1.0, 1.0}};
    ResidualReport rep = residual(EqSystem::Vacuum, kchart, pot, pts, 1e-7);
    feed(kvac, rep.max_full);
    feed(kvac, rep.max_trace);
  }

  finish(b);
  return b.rows;
}

}  // namespace curvlab
