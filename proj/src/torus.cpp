#include "curvlab/torus.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <thread>

#include "curvlab/errors.hpp"
#include "curvlab/geometry.hpp"

namespace curvlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }

// Forward r2c spectrum of one scalar field with on-demand derivative
// synthesis.  Plans use FFTW_ESTIMATE: deterministic and cheap at these
// sizes.
class SpectralEngine {
 public:
  explicit SpectralEngine(int n)
      : n_(n), nc_(n / 2 + 1), real_(std::size_t(n) * n * n),
        cplx_(std::size_t(n) * n * nc_) {}

  void forward(const std::vector<double>& field) {
    std::memcpy(real_.data(), field.data(), real_.size() * sizeof(double));
    fftw_plan plan = fftw_plan_dft_r2c_3d(
        n_, n_, n_, real_.data(),
        reinterpret_cast<fftw_complex*>(cplx_.data()), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    double scale = 1.0 / double(real_.size());
    for (auto& c : cplx_) c *= scale;
  }

  // samples of d^alpha applied to the stored spectrum
  std::vector<double> derivative(const std::array<int, 3>& alpha) const {
    std::vector<std::complex<double>> work(cplx_.size());
    const std::complex<double> iu(0.0, 1.0);
    for (int i = 0; i < n_; ++i) {
      int ki = wavenumber(i, n_);
      for (int j = 0; j < n_; ++j) {
        int kj = wavenumber(j, n_);
        for (int k = 0; k < nc_; ++k) {
          int kk = k;  // last axis holds 0..n/2
          std::complex<double> sym(1.0, 0.0);
          bool dead = false;
          const int ks[3] = {ki, kj, kk};
          for (int a = 0; a < 3; ++a) {
            if (alpha[a] == 0) continue;
            // the Nyquist mode has no well-defined odd derivative
            if ((alpha[a] % 2) && std::abs(ks[a]) * 2 == n_) {
              dead = true;
              break;
            }
            std::complex<double> f = iu * double(ks[a]);
            for (int rep = 0; rep < alpha[a]; ++rep) sym *= f;
          }
          std::size_t id = (std::size_t(i) * n_ + j) * nc_ + k;
          work[id] = dead ? 0.0 : sym * cplx_[id];
        }
      }
    }
    std::vector<double> out(real_.size());
    fftw_plan plan = fftw_plan_dft_c2r_3d(
        n_, n_, n_, reinterpret_cast<fftw_complex*>(work.data()), out.data(),
        FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
  }

  // energy fraction above |k|_inf > n/3
  double high_mode_ratio() const {
    double total = 0.0, high = 0.0;
    for (int i = 0; i < n_; ++i) {
      int ki = wavenumber(i, n_);
      for (int j = 0; j < n_; ++j) {
        int kj = wavenumber(j, n_);
        for (int k = 0; k < nc_; ++k) {
          std::size_t id = (std::size_t(i) * n_ + j) * nc_ + k;
          double w = (k == 0 || 2 * k == n_) ? 1.0 : 2.0;
          double e = w * std::norm(cplx_[id]);
          total += e;
          int kinf = std::max({std::abs(ki), std::abs(kj), k});
          if (3 * kinf > n_) high += e;
        }
      }
    }
    return total > 0.0 ? high / total : 0.0;
  }

 private:
  int n_, nc_;
  std::vector<double> real_;
  std::vector<std::complex<double>> cplx_;
};

void run_chunked(std::int64_t count, int threads,
                 const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (threads <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::int64_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

// Derivative samples of every metric component for all multi-indices up to
// `order`.
struct DerivativeTables {
  int n = 0;
  int n_ids = 0;
  // d[comp][multi-index id] -> field
  std::array<std::vector<std::vector<double>>, 6> d;
};

int ids_for_order(int order) {
  int count = 0;
  for (int id = 0; id < jets::kNumCoeffs; ++id)
    if (jets::index_table()[id].degree() <= order) ++count;
  return count;
}

DerivativeTables build_tables(const TorusField& g, int order) {
  DerivativeTables t;
  t.n = g.n();
  t.n_ids = ids_for_order(order);
  SpectralEngine engine(g.n());
  for (int comp = 0; comp < 6; ++comp) {
    t.d[comp].resize(t.n_ids);
    engine.forward(g.component(comp));
    for (int id = 0; id < t.n_ids; ++id) {
      auto mi = jets::index_table()[id];
      if (mi.degree() == 0)
        t.d[comp][id] = g.component(comp);  // keep the exact samples
      else
        t.d[comp][id] = engine.derivative({mi.a, mi.b, mi.c});
    }
  }
  return t;
}

Sym2<Jet> jets_at(const DerivativeTables& t, std::int64_t node) {
  Sym2<Jet> g(3);
  for (int comp = 0; comp < 6; ++comp) {
    Jet j(3);
    for (int id = 0; id < t.n_ids; ++id) j.coeff(id) = t.d[comp][id][node];
    g.v[comp] = j;
  }
  return g;
}

struct NodeScalars {
  std::vector<double> r2, z2, s, s2, sqrtdet;
};

NodeScalars node_scalars(const TorusField& g, int threads) {
  DerivativeTables tables = build_tables(g, 2);
  std::int64_t count = g.nodes();
  NodeScalars out;
  out.r2.resize(count);
  out.z2.resize(count);
  out.s.resize(count);
  out.s2.resize(count);
  out.sqrtdet.resize(count);
  run_chunked(count, threads, [&](std::int64_t lo, std::int64_t hi) {
    // curvature values only need degree-2 coefficients; cap the jet algebra
    JetTruncationGuard trunc(2);
    for (std::int64_t node = lo; node < hi; ++node) {
      JetGeometry geo = build_geometry(jets_at(tables, node));
      Sym2d ginv(3), ricci(3), z(3);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          ginv(i, j) = geo.ginv(i, j).value();
          ricci(i, j) = geo.ricci(i, j).value();
          z(i, j) = geo.z(i, j).value();
        }
      double det = geo.det.value();
      if (!(det > 0.0))
        throw SpdError("metric lost positivity on the grid");
      out.r2[node] = inner(ginv, ricci, ricci);
      out.z2[node] = inner(ginv, z, z);
      double s = geo.s.value();
      out.s[node] = s;
      out.s2[node] = s * s;
      out.sqrtdet[node] = std::sqrt(det);
    }
  });
  return out;
}

FunctionalValues integrate_scalars(const NodeScalars& ns, int n, double eps) {
  std::int64_t count = std::int64_t(n) * n * n;
  double cell = std::pow(kTwoPi / n, 3.0);
  double r2 = 0.0, z2 = 0.0, s2 = 0.0, vol = 0.0;
  for (std::int64_t node = 0; node < count; ++node) {
    double dv = ns.sqrtdet[node] * cell;
    r2 += ns.r2[node] * dv;
    z2 += ns.z2[node] * dv;
    s2 += ns.s2[node] * dv;
    vol += dv;
  }
  return assemble_functionals(r2, z2, s2, vol, eps);
}

FunctionalValues values_nocheck(const TorusField& g, double eps, int threads) {
  return integrate_scalars(node_scalars(g, threads), g.n(), eps);
}

GradientField gradient_nocheck(GridFunctional f, const TorusField& g,
                               int threads) {
  DerivativeTables tables = build_tables(g, 4);
  std::int64_t count = g.nodes();
  GradientField out;
  out.gradient = TorusField(g.n(), 0.0);
  NodeScalars ns;
  ns.r2.resize(count);
  ns.z2.resize(count);
  ns.s2.resize(count);
  ns.sqrtdet.resize(count);
  run_chunked(count, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t node = lo; node < hi; ++node) {
      JetGeometry geo = build_geometry(jets_at(tables, node));
      Sym2d grad = f == GridFunctional::R2 ? gradient_r2(geo)
                                           : gradient_z2(geo);
      for (int comp = 0; comp < 6; ++comp)
        out.gradient.at(comp, node) = grad.v[comp];
      Sym2d ginv(3), ricci(3), z(3);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          ginv(i, j) = geo.ginv(i, j).value();
          ricci(i, j) = geo.ricci(i, j).value();
          z(i, j) = geo.z(i, j).value();
        }
      ns.r2[node] = inner(ginv, ricci, ricci);
      ns.z2[node] = inner(ginv, z, z);
      double s = geo.s.value();
      ns.s2[node] = s * s;
      ns.sqrtdet[node] = std::sqrt(geo.det.value());
    }
  });
  out.values = integrate_scalars(ns, g.n(), 1.0);
  return out;
}

}  // namespace

TorusField::TorusField(int n, double diagonal) : n_(n) {
  for (auto& c : comp_) c.assign(nodes(), 0.0);
  for (int d = 0; d < 3; ++d) {
    auto& c = comp_[Sym2d::slot(d, d)];
    for (auto& v : c) v = diagonal;
  }
}

Point TorusField::node_coords(std::int64_t node) const {
  int k = int(node % n_);
  int j = int((node / n_) % n_);
  int i = int(node / (std::int64_t(n_) * n_));
  double step = kTwoPi / n_;
  return {i * step, j * step, k * step};
}

TorusField TorusField::sample(const MetricChart& chart, int n) {
  if (chart.dim() != 3)
    throw DomainError("torus sampling needs a 3-dimensional chart");
  if (n < 8 || n % 2 != 0)
    throw DomainError("grid size must be even and at least 8");
  TorusField f(n, 0.0);
  for (std::int64_t node = 0; node < f.nodes(); ++node) {
    Point x = f.node_coords(node);
    std::span<const double> xs(x.data(), 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        f.at(Sym2d::slot(i, j), node) =
            eval(*chart.component(i, j), xs, chart.params());
  }
  f.check_spd();
  f.check_aliasing();
  return f;
}

namespace {

// xorshift-style generator mirrored from the test support so pinned seeds
// stay meaningful across binaries
struct SplitMix {
  std::uint64_t state;
  double uniform() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

TorusField band_limited_field(int n, std::uint64_t seed, double amplitude,
                              bool with_delta) {
  if (n < 8 || n % 2 != 0)
    throw DomainError("grid size must be even and at least 8");
  if (amplitude > 0.2)
    throw DomainError("perturbation amplitude above 0.2 breaks the SPD bound");
  SplitMix rng{seed ? seed : 1};
  int kmax = std::min(3, n / 3);

  // half-space mode list (first nonzero component positive)
  struct Mode {
    int k[3];
    double amp[6], phase[6];
  };
  std::vector<Mode> modes;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b)
      for (int c = -kmax; c <= kmax; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if (a < 0 || (a == 0 && (b < 0 || (b == 0 && c < 0)))) continue;
        Mode m{{a, b, c}, {}, {}};
        double w = 1.0 / (1.0 + a * a + b * b + c * c);
        for (int comp = 0; comp < 6; ++comp) {
          m.amp[comp] = rng.uniform(-1.0, 1.0) * w;
          m.phase[comp] = rng.uniform(0.0, kTwoPi);
        }
        modes.push_back(m);
      }

  TorusField f(n, 0.0);
  double peak = 0.0;
  for (std::int64_t node = 0; node < f.nodes(); ++node) {
    Point x = f.node_coords(node);
    for (int comp = 0; comp < 6; ++comp) {
      double v = 0.0;
      for (const Mode& m : modes)
        v += m.amp[comp] *
             std::cos(m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] +
                      m.phase[comp]);
      f.at(comp, node) = v;
      peak = std::max(peak, std::abs(v));
    }
  }
  double scale = peak > 0.0 ? amplitude / peak : 0.0;
  for (int comp = 0; comp < 6; ++comp)
    for (auto& v : f.component(comp)) v *= scale;
  if (with_delta)
    for (int d = 0; d < 3; ++d)
      for (auto& v : f.component(Sym2d::slot(d, d))) v += 1.0;
  return f;
}

}  // namespace

TorusField TorusField::random_metric(int n, std::uint64_t seed,
                                     double amplitude) {
  TorusField f = band_limited_field(n, seed, amplitude, true);
  f.check_spd();
  f.check_aliasing();
  return f;
}

TorusField TorusField::random_perturbation(int n, std::uint64_t seed,
                                           double amplitude) {
  return band_limited_field(n, seed, amplitude, false);
}

TorusField& TorusField::operator+=(const TorusField& o) {
  for (int c = 0; c < 6; ++c)
    for (std::int64_t i = 0; i < nodes(); ++i) comp_[c][i] += o.comp_[c][i];
  return *this;
}

TorusField& TorusField::add_scaled(const TorusField& o, double scale) {
  for (int c = 0; c < 6; ++c)
    for (std::int64_t i = 0; i < nodes(); ++i)
      comp_[c][i] += scale * o.comp_[c][i];
  return *this;
}

TorusField& TorusField::operator*=(double s) {
  for (int c = 0; c < 6; ++c)
    for (auto& v : comp_[c]) v *= s;
  return *this;
}

TorusField TorusField::shifted(int di, int dj, int dk) const {
  TorusField out(n_, 0.0);
  auto wrap = [&](int a) { return ((a % n_) + n_) % n_; };
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        std::int64_t src = (std::int64_t(i) * n_ + j) * n_ + k;
        std::int64_t dst =
            (std::int64_t(wrap(i + di)) * n_ + wrap(j + dj)) * n_ + wrap(k + dk);
        for (int c = 0; c < 6; ++c) out.comp_[c][dst] = comp_[c][src];
      }
  return out;
}

void TorusField::check_spd() const {
  for (std::int64_t node = 0; node < nodes(); ++node) {
    Sym2d g(3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) g(i, j) = at(Sym2d::slot(i, j), node);
    require_spd(g, node_coords(node), "torus field");
  }
}

double TorusField::aliasing_ratio() const {
  SpectralEngine engine(n_);
  double worst = 0.0;
  for (int c = 0; c < 6; ++c) {
    engine.forward(comp_[c]);
    worst = std::max(worst, engine.high_mode_ratio());
  }
  return worst;
}

void TorusField::check_aliasing() const {
  double ratio = aliasing_ratio();
  if (ratio > 1e-10)
    throw DomainError(
        "aliasing guard: spectral energy fraction above |k| > n/3 is " +
        std::to_string(ratio));
}

std::vector<double> spectral_derivative(const std::vector<double>& field,
                                        int n,
                                        const std::array<int, 3>& alpha) {
  SpectralEngine engine(n);
  engine.forward(field);
  return engine.derivative(alpha);
}

double torus_integral(const std::vector<double>& field, int n) {
  double cell = std::pow(kTwoPi / n, 3.0);
  double acc = 0.0;
  for (double v : field) acc += v;
  return acc * cell;
}

FunctionalValues functional_values(const TorusField& g, double eps,
                                   int threads) {
  return values_nocheck(g, eps, threads);
}

std::vector<double> grid_scalar_curvature(const TorusField& g, int threads) {
  return node_scalars(g, threads).s;
}

GradientField functional_and_gradient(GridFunctional f, const TorusField& g,
                                      int threads) {
  g.check_aliasing();
  return gradient_nocheck(f, g, threads);
}

double l2_pairing(const TorusField& g, const TorusField& a,
                  const TorusField& b, int threads) {
  std::int64_t count = g.nodes();
  std::vector<double> integrand(count);
  run_chunked(count, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t node = lo; node < hi; ++node) {
      Sym2d gv(3), av(3), bv(3);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          int c = Sym2d::slot(i, j);
          gv(i, j) = g.at(c, node);
          av(i, j) = a.at(c, node);
          bv(i, j) = b.at(c, node);
        }
      Sym2d ginv = inverse_sym(gv);
      integrand[node] = inner(ginv, av, bv) * std::sqrt(det_sym(gv));
    }
  });
  double cell = std::pow(kTwoPi / g.n(), 3.0);
  double acc = 0.0;
  for (double v : integrand) acc += v;
  return acc * cell;
}

VariationCheck first_variation_check(GridFunctional f, const TorusField& g,
                                     const TorusField& h, double t0,
                                     int threads) {
  auto value_at = [&](double t) {
    TorusField gt = g;
    gt.add_scaled(h, t);
    FunctionalValues v = values_nocheck(gt, 1.0, threads);
    return f == GridFunctional::R2 ? v.r2 : v.z2;
  };
  auto central = [&](double t) {
    return (value_at(t) - value_at(-t)) / (2.0 * t);
  };
  double d1 = central(t0);
  double d2 = central(t0 / 2.0);
  VariationCheck out;
  out.fd_derivative = (4.0 * d2 - d1) / 3.0;
  GradientField grad = functional_and_gradient(f, g, threads);
  out.pairing = l2_pairing(g, grad.gradient, h, threads);
  out.kappa = out.fd_derivative / out.pairing;
  return out;
}

TorusField flow_step(const TorusField& g, GridFunctional f, double dt,
                     int threads) {
  if (!(dt > 0.0)) throw DomainError("flow step size must be positive");
  GradientField grad = gradient_nocheck(f, g, threads);
  TorusField next = g;
  next.add_scaled(grad.gradient, -dt);
  next.check_spd();
  return next;
}

FlowTrace flow_run(const TorusField& g0, GridFunctional f, double dt,
                   int steps, int threads) {
  FlowTrace trace;
  TorusField g = g0;
  double prev = 0.0;
  for (int step = 0; step <= steps; ++step) {
    GradientField grad = gradient_nocheck(f, g, threads);
    double value = f == GridFunctional::R2 ? grad.values.r2 : grad.values.z2;
    double max_grad = 0.0;
    for (int c = 0; c < 6; ++c)
      for (double v : grad.gradient.component(c))
        max_grad = std::max(max_grad, std::abs(v));
    trace.rows.push_back({step, value, max_grad});
    if (step > 0 && value >= prev) {
      trace.ok = false;
      trace.failure = "functional increased at step " + std::to_string(step) +
                      " (" + std::to_string(prev) + " -> " +
                      std::to_string(value) + "); step size too large";
      return trace;
    }
    prev = value;
    if (step == steps) break;
    try {
      TorusField next = g;
      next.add_scaled(grad.gradient, -dt);
      next.check_spd();
      g = std::move(next);
    } catch (const SpdError& e) {
      trace.ok = false;
      trace.failure = std::string("positivity lost: ") + e.what();
      return trace;
    }
  }
  return trace;
}

}  // namespace curvlab
