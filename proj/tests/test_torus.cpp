#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvlab/exact_solutions.hpp"
#include "curvlab/geometry.hpp"
#include "curvlab/torus.hpp"
#include "support.hpp"

using namespace curvlab;

TEST_CASE("flat field: zero curvature, zero gradient, exact volume") {
  TorusField flat(16, 1.0);
  FunctionalValues v = functional_values(flat);
  CHECK(v.r2 == 0.0);
  CHECK(v.z2 == 0.0);
  CHECK(v.volume == doctest::Approx(std::pow(2 * M_PI, 3)).epsilon(1e-13));

  GradientField g = functional_and_gradient(GridFunctional::R2, flat);
  for (int c = 0; c < 6; ++c)
    for (double x : g.gradient.component(c)) CHECK(x == 0.0);
}

TEST_CASE("spectral derivatives are exact on band-limited fields") {
  const int n = 16;
  TorusField probe(n, 0.0);
  auto& c0 = probe.component(0);
  for (std::int64_t node = 0; node < probe.nodes(); ++node) {
    Point x = probe.node_coords(node);
    c0[node] = std::sin(2 * x[0]) * std::cos(x[1]);
  }
  auto dx = spectral_derivative(c0, n, {1, 0, 0});
  auto dxxy = spectral_derivative(c0, n, {2, 1, 0});
  for (std::int64_t node = 0; node < probe.nodes(); ++node) {
    Point x = probe.node_coords(node);
    CHECK(dx[node] == doctest::Approx(2 * std::cos(2 * x[0]) * std::cos(x[1]))
                          .epsilon(1e-12));
    CHECK(dxxy[node] ==
          doctest::Approx(4 * std::sin(2 * x[0]) * std::sin(x[1]))
              .epsilon(1e-12));
  }
}

TEST_CASE("grid curvature matches the chart pipeline at grid points") {
  MetricChart chart = flat_torus_chart();
  chart.set_component(0, 0, parse("1 + 0.1*sin(x2)"));
  const int n = 32;
  TorusField field = TorusField::sample(chart, n);

  std::vector<double> s_grid = grid_scalar_curvature(field);
  double max_err = 0.0;
  for (std::int64_t node = 0; node < field.nodes();
       node += 97) {  // subsample for speed
    Point x = field.node_coords(node);
    double s_chart = curvature(chart, x, Depth::SecondOrder).s;
    max_err = std::max(max_err, std::abs(s_grid[node] - s_chart));
  }
  CHECK(max_err < 1e-8);

  // full-field agreement of the integrated functional as well
  FunctionalValues v = functional_values(field);
  double cell = std::pow(2 * M_PI / n, 3);
  double r2 = 0.0;
  for (std::int64_t node = 0; node < field.nodes(); ++node) {
    Point x = field.node_coords(node);
    CurvaturePack p = curvature(chart, x, Depth::SecondOrder);
    r2 += p.norm_r2 * std::sqrt(p.det) * cell;
  }
  CHECK(v.r2 == doctest::Approx(r2).epsilon(1e-8));
}

TEST_CASE("grid-vs-chart error decays spectrally for analytic metrics") {
  // full-spectrum analytic components: harmonics decay like (1/2)^k / k!,
  // so N = 16 truncates at a visible level while N = 24 reaches round-off
  MetricChart chart = flat_torus_chart();
  chart.set_component(0, 0, parse("1 + 0.1*exp(sin(x2))"));
  chart.set_component(1, 1, parse("1 + 0.08*exp(cos(x3))"));

  auto max_s_error = [&](int n) {
    TorusField field = TorusField::sample(chart, n);
    std::vector<double> s_grid = grid_scalar_curvature(field);
    double err = 0.0;
    for (std::int64_t node = 0; node < field.nodes(); node += 7) {
      Point x = field.node_coords(node);
      double want = curvature(chart, x, Depth::SecondOrder).s;
      err = std::max(err, std::abs(s_grid[node] - want));
    }
    return err;
  };
  double e16 = max_s_error(16);
  double e24 = max_s_error(24);
  double e32 = max_s_error(32);
  INFO("errors: ", e16, " ", e24, " ", e32);
  CHECK(e16 > 1e-12);               // truncation visible at N = 16
  CHECK(e24 < e16 / 1000.0);        // far faster than any algebraic order
  CHECK(e32 <= std::max(2.0 * e24, 1e-12));
  CHECK(e32 < 1e-10);
}

TEST_CASE("random fields pass their own guards and are reproducible") {
  TorusField a = TorusField::random_metric(16, 7, 0.1);
  TorusField b = TorusField::random_metric(16, 7, 0.1);
  for (int c = 0; c < 6; ++c)
    for (std::int64_t i = 0; i < a.nodes(); ++i)
      CHECK(a.at(c, i) == b.at(c, i));
  CHECK(a.aliasing_ratio() < 1e-10);

  TorusField other = TorusField::random_metric(16, 8, 0.1);
  bool differs = false;
  for (std::int64_t i = 0; i < a.nodes() && !differs; ++i)
    differs = a.at(0, i) != other.at(0, i);
  CHECK(differs);
}

TEST_CASE("aliasing guard rejects under-resolved samples") {
  MetricChart chart = flat_torus_chart();
  chart.set_component(0, 0, parse("1 + 0.5*exp(sin(x1))*0.4"));
  // N = 8 cannot hold the harmonics of exp(sin): the top third carries
  // visible energy
  CHECK_THROWS_AS(TorusField::sample(chart, 8), DomainError);
  // the same metric resolves fine at N = 32
  CHECK_NOTHROW(TorusField::sample(chart, 32));
}

TEST_CASE("derivatives commute with grid translations") {
  TorusField f = TorusField::random_metric(16, 11, 0.15);
  TorusField shifted = f.shifted(3, 5, 1);
  auto d_shift = spectral_derivative(shifted.component(0), 16, {1, 0, 0});
  auto shift_d = spectral_derivative(f.component(0), 16, {1, 0, 0});
  // shift the derivative field and compare
  TorusField wrap(16, 0.0);
  wrap.component(0) = shift_d;
  TorusField wrapped = wrap.shifted(3, 5, 1);
  for (std::int64_t i = 0; i < f.nodes(); ++i)
    CHECK(d_shift[i] == doctest::Approx(wrapped.at(0, i)).epsilon(1e-12));
}

TEST_CASE("quadrature equals the zero mode times the volume") {
  TorusField f = TorusField::random_perturbation(16, 3, 0.2);
  double integral = torus_integral(f.component(0), 16);
  // a pure band-limited perturbation has zero mean
  CHECK(std::abs(integral) < 1e-12);
  auto& c = f.component(1);
  for (auto& v : c) v += 0.37;
  CHECK(torus_integral(c, 16) ==
        doctest::Approx(0.37 * std::pow(2 * M_PI, 3)).epsilon(1e-12));
}

TEST_CASE("scale laws of the global functionals") {
  TorusField g = TorusField::random_metric(16, 5, 0.1);
  FunctionalValues base = functional_values(g);
  for (double lambda : {0.5, 2.0}) {
    TorusField scaled = g;
    scaled *= lambda * lambda;
    FunctionalValues v = functional_values(scaled);
    CHECK(v.r2 == doctest::Approx(base.r2 / lambda).epsilon(1e-10));
    CHECK(v.i_eps == doctest::Approx(base.i_eps).epsilon(1e-10));
    CHECK(v.volume ==
          doctest::Approx(base.volume * std::pow(lambda, 3)).epsilon(1e-10));
  }
}

TEST_CASE("first variation matches the gradient pairing") {
  const int n = 16;
  TorusField g = TorusField::random_metric(n, 7, 0.1);
  for (GridFunctional f : {GridFunctional::R2, GridFunctional::Z2}) {
    double kappas[3];
    for (int trial = 0; trial < 3; ++trial) {
      TorusField h = TorusField::random_perturbation(n, 100 + trial, 0.1);
      VariationCheck vc = first_variation_check(f, g, h);
      INFO("functional ", f == GridFunctional::R2 ? "R2" : "Z2", " trial ",
           trial, ": kappa = ", vc.kappa, " fd = ", vc.fd_derivative,
           " pairing = ", vc.pairing);
      CHECK(std::abs(vc.kappa - 1.0) < 1e-4);
      kappas[trial] = vc.kappa;
    }
    double mean = (kappas[0] + kappas[1] + kappas[2]) / 3.0;
    double var = 0.0;
    for (double k : kappas) var += (k - mean) * (k - mean);
    double std_over_mean = std::sqrt(var / 3.0) / std::abs(mean);
    CHECK(std_over_mean < 1e-3);
  }
}

TEST_CASE("flow demonstrator descends and the guard trips on huge steps") {
  const int n = 16;
  TorusField g = TorusField::random_metric(n, 7, 0.1);
  FlowTrace trace = flow_run(g, GridFunctional::R2, 1e-5, 10);
  CHECK(trace.ok);
  REQUIRE(trace.rows.size() == 11);
  for (size_t k = 1; k < trace.rows.size(); ++k)
    CHECK(trace.rows[k].value < trace.rows[k - 1].value);

  FlowTrace guard = flow_run(g, GridFunctional::R2, 10.0, 10);
  CHECK(!guard.ok);
  CHECK(!guard.failure.empty());
}

TEST_CASE("threaded evaluation is bitwise identical to serial") {
  TorusField g = TorusField::random_metric(16, 9, 0.12);
  GradientField serial = functional_and_gradient(GridFunctional::R2, g, 1);
  GradientField parallel = functional_and_gradient(GridFunctional::R2, g, 4);
  CHECK(serial.values.r2 == parallel.values.r2);
  for (int c = 0; c < 6; ++c)
    for (std::int64_t i = 0; i < g.nodes(); ++i)
      CHECK(serial.gradient.at(c, i) == parallel.gradient.at(c, i));
}

TEST_CASE("sample validates grid size") {
  MetricChart chart = flat_torus_chart();
  CHECK_THROWS_AS(TorusField::sample(chart, 7), DomainError);
  CHECK_THROWS_AS(TorusField::sample(chart, 6), DomainError);
}
