#include "curvlab/jets.hpp"

#include <cmath>
#include <vector>

namespace curvlab {
namespace jets {
namespace {

constexpr std::array<MultiIndex, kNumCoeffs> build_index_table() {
  std::array<MultiIndex, kNumCoeffs> t{};
  int id = 0;
  for (int deg = 0; deg <= Jet::kOrder; ++deg) {
    for (int a = deg; a >= 0; --a) {
      for (int b = deg - a; b >= 0; --b) {
        int c = deg - a - b;
        t[id++] = MultiIndex{static_cast<std::uint8_t>(a),
                             static_cast<std::uint8_t>(b),
                             static_cast<std::uint8_t>(c)};
      }
    }
  }
  return t;
}

constexpr auto kIndexTable = build_index_table();

constexpr std::array<std::array<std::array<int, 5>, 5>, 5> build_lookup() {
  std::array<std::array<std::array<int, 5>, 5>, 5> lut{};
  for (auto& p : lut)
    for (auto& q : p) q.fill(-1);
  for (int id = 0; id < kNumCoeffs; ++id) {
    const auto& mi = kIndexTable[id];
    lut[mi.a][mi.b][mi.c] = id;
  }
  return lut;
}

constexpr auto kLookup = build_lookup();

struct ProductTerm {
  std::int16_t lhs, rhs;
  double weight;  // multinomial prod C(gamma_i, alpha_i)
};

struct ProductTable {
  // terms for result index gamma live in [offset[gamma], offset[gamma+1])
  std::vector<ProductTerm> terms;
  std::array<int, kNumCoeffs + 1> offset{};
};

constexpr double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const ProductTable& product_table() {
  static const ProductTable table = [] {
    ProductTable t;
    for (int g = 0; g < kNumCoeffs; ++g) {
      t.offset[g] = static_cast<int>(t.terms.size());
      const auto& mg = kIndexTable[g];
      for (int a = 0; a <= mg.a; ++a)
        for (int b = 0; b <= mg.b; ++b)
          for (int c = 0; c <= mg.c; ++c) {
            int lhs = kLookup[a][b][c];
            int rhs = kLookup[mg.a - a][mg.b - b][mg.c - c];
            double w = binom(mg.a, a) * binom(mg.b, b) * binom(mg.c, c);
            t.terms.push_back({static_cast<std::int16_t>(lhs),
                               static_cast<std::int16_t>(rhs), w});
          }
    }
    t.offset[kNumCoeffs] = static_cast<int>(t.terms.size());
    return t;
  }();
  return table;
}

// derivative shift: id of alpha + e_axis, or -1 when it leaves order 4
constexpr std::array<std::array<int, kNumCoeffs>, 3> build_shift() {
  std::array<std::array<int, kNumCoeffs>, 3> s{};
  for (int axis = 0; axis < 3; ++axis)
    for (int id = 0; id < kNumCoeffs; ++id) {
      auto mi = kIndexTable[id];
      int a = mi.a + (axis == 0), b = mi.b + (axis == 1), c = mi.c + (axis == 2);
      s[axis][id] = (a + b + c <= Jet::kOrder) ? kLookup[a][b][c] : -1;
    }
  return s;
}

constexpr auto kShift = build_shift();

}  // namespace

const std::array<MultiIndex, kNumCoeffs>& index_table() { return kIndexTable; }

int index_of(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a + b + c > Jet::kOrder) return -1;
  return kLookup[a][b][c];
}

int coeff_count(int order) {
  int count = 0;
  for (const auto& mi : kIndexTable)
    if (mi.degree() <= order) ++count;
  return count;
}

}  // namespace jets

namespace {
thread_local int g_trunc_coeffs = jets::kNumCoeffs;
}

JetTruncationGuard::JetTruncationGuard(int order) : prev_(g_trunc_coeffs) {
  g_trunc_coeffs = jets::coeff_count(order);
}

JetTruncationGuard::~JetTruncationGuard() { g_trunc_coeffs = prev_; }

using jets::kNumCoeffs;

void Jet::check_dim(int dim) {
  if (dim < 1 || dim > 3)
    throw DomainError("jet dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

Jet Jet::seed(int axis, double v, int dim) {
  check_dim(dim);
  if (axis < 0 || axis >= dim)
    throw DomainError("jet seed axis " + std::to_string(axis) +
                      " out of range for dimension " + std::to_string(dim));
  Jet j(dim);
  j.c_[0] = v;
  j.c_[jets::index_of(axis == 0, axis == 1, axis == 2)] = 1.0;
  return j;
}

double Jet::deriv(int a, int b, int c) const {
  int id = jets::index_of(a, b, c);
  if (id < 0) throw DomainError("jet derivative order above 4 requested");
  return c_[id];
}

void Jet::set_deriv(int a, int b, int c, double v) {
  int id = jets::index_of(a, b, c);
  if (id < 0) throw DomainError("jet derivative order above 4 requested");
  c_[id] = v;
}

Jet Jet::derivative(int axis) const {
  Jet r(dim_);
  for (int id = 0; id < kNumCoeffs; ++id) {
    int src = jets::kShift[axis][id];
    r.c_[id] = src >= 0 ? c_[src] : 0.0;
  }
  return r;
}

Jet Jet::operator-() const {
  Jet r(dim_);
  for (int i = 0; i < kNumCoeffs; ++i) r.c_[i] = -c_[i];
  return r;
}

namespace {
int merged_dim(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim())
    throw DomainError("jet dimension mismatch: " + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()));
  return a.dim();
}
}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  merged_dim(*this, o);
  for (int i = 0; i < kNumCoeffs; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  merged_dim(*this, o);
  for (int i = 0; i < kNumCoeffs; ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double v) {
  for (int i = 0; i < kNumCoeffs; ++i) c_[i] *= v;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(merged_dim(a, b));
  const auto& t = jets::product_table();
  const int top = g_trunc_coeffs;
  for (int g = 0; g < top; ++g) {
    double acc = 0.0;
    for (int k = t.offset[g]; k < t.offset[g + 1]; ++k) {
      const auto& term = t.terms[k];
      acc += term.weight * a.c_[term.lhs] * b.c_[term.rhs];
    }
    r.c_[g] = acc;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  merged_dim(a, b);
  if (b.value() == 0.0)
    throw DomainError("jet division by a jet with zero value");
  Jet r(a.dim());
  const auto& t = jets::product_table();
  const double inv = 1.0 / b.c_[0];
  const int top = g_trunc_coeffs;
  // Solve r*b = a coefficient by coefficient; indices are degree-ordered so
  // every alpha < gamma in the Leibniz sum is already available.
  for (int g = 0; g < top; ++g) {
    double acc = a.c_[g];
    for (int k = t.offset[g]; k < t.offset[g + 1]; ++k) {
      const auto& term = t.terms[k];
      if (term.lhs == g) continue;  // the r[gamma]*b[0] term being solved for
      acc -= term.weight * r.c_[term.lhs] * b.c_[term.rhs];
    }
    r.c_[g] = acc * inv;
  }
  return r;
}

Jet operator/(double a, const Jet& b) { return Jet::constant(a, b.dim()) / b; }

namespace {

// f(u) for f with Taylor coefficients f^(k)(u0)/k!, via Horner in the
// nilpotent part w = u - u0 (w^5 vanishes at order 4).
Jet compose(const Jet& u, const std::array<double, Jet::kOrder + 1>& dval) {
  static constexpr double kInvFact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
  Jet w = u;
  w.coeff(0) = 0.0;
  Jet r = Jet::constant(dval[4] * kInvFact[4], u.dim());
  for (int k = 3; k >= 0; --k) {
    r = r * w;
    r += dval[k] * kInvFact[k];
  }
  return r;
}

[[noreturn]] void domain_violation(const char* fn, double v) {
  throw DomainError(std::string(fn) + " domain violation at value " +
                    std::to_string(v));
}

}  // namespace

Jet sin(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, {s, c, -s, -c, s});
}

Jet cos(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, {c, -s, -c, s, c});
}

Jet exp(const Jet& a) {
  double e = std::exp(a.value());
  return compose(a, {e, e, e, e, e});
}

Jet log(const Jet& a) {
  double v = a.value();
  if (v <= 0.0) domain_violation("log", v);
  double i = 1.0 / v, i2 = i * i;
  return compose(a, {std::log(v), i, -i2, 2.0 * i2 * i, -6.0 * i2 * i2});
}

Jet sqrt(const Jet& a) {
  double v = a.value();
  if (v <= 0.0) domain_violation("sqrt", v);
  double s = std::sqrt(v), i = 1.0 / v;
  return compose(a, {s, 0.5 * s * i, -0.25 * s * i * i, 0.375 * s * i * i * i,
                     -0.9375 * s * i * i * i * i});
}

Jet recip(const Jet& a) {
  if (a.value() == 0.0) domain_violation("recip", 0.0);
  return 1.0 / a;
}

Jet pow(const Jet& a, double p) {
  double ip;
  if (std::modf(p, &ip) == 0.0 && std::abs(p) <= 64.0) {
    // Integer exponent: repeated multiplication, valid for any base.
    int n = static_cast<int>(ip);
    if (n == 0) return Jet::constant(1.0, a.dim());
    bool neg = n < 0;
    unsigned e = neg ? static_cast<unsigned>(-static_cast<long>(n))
                     : static_cast<unsigned>(n);
    if (neg && a.value() == 0.0) domain_violation("pow(negative exponent)", 0.0);
    Jet base = a, acc = Jet::constant(1.0, a.dim());
    while (e > 0) {
      if (e & 1u) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return neg ? 1.0 / acc : acc;
  }
  double v = a.value();
  if (v <= 0.0) domain_violation("pow(non-integer exponent)", v);
  std::array<double, Jet::kOrder + 1> d;
  double f = std::pow(v, p), q = p;
  d[0] = f;
  for (int k = 1; k <= Jet::kOrder; ++k) {
    f *= q / v;
    d[k] = f;
    q -= 1.0;
  }
  return compose(a, d);
}

}  // namespace curvlab
