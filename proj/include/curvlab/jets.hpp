#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "curvlab/errors.hpp"

namespace curvlab {

// Truncated Taylor expansion of a scalar function of up to 3 variables,
// carried to derivative order 4.  Coefficients are stored per multi-index
// alpha as the derivative values d^alpha f(x0) (not divided by alpha!).
//
// Order 4 is all the fourth-order operators downstream ever need; keeping it
// fixed gives allocation-free value semantics.  Derivative extraction drops
// the top order: coefficients of |alpha| = 4 in the result are zeroed, and
// every arithmetic operation preserves "exact up to order k" per factor, so
// lower-order coefficients never see stale data.
class Jet {
 public:
  static constexpr int kOrder = 4;
  static constexpr int kCoeffs = 35;  // C(3+4,4), dense over dim <= 3

  Jet() : dim_(3) { c_.fill(0.0); }
  explicit Jet(int dim) : dim_(dim) {
    check_dim(dim);
    c_.fill(0.0);
  }

  static Jet constant(double v, int dim = 3) {
    Jet j(dim);
    j.c_[0] = v;
    return j;
  }

  // Jet of the coordinate function x_axis at base value v.
  static Jet seed(int axis, double v, int dim = 3);

  int dim() const { return dim_; }
  double value() const { return c_[0]; }

  // Coefficient (= derivative value) for the multi-index (a, b, c).
  double deriv(int a, int b = 0, int c = 0) const;
  void set_deriv(int a, int b, int c, double v);

  double coeff(int id) const { return c_[id]; }
  double& coeff(int id) { return c_[id]; }

  // Partial derivative: shifts multi-indices down along `axis` and zeroes
  // the now-unknown top order.
  Jet derivative(int axis) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double v) { c_[0] += v; return *this; }
  Jet& operator-=(double v) { c_[0] -= v; return *this; }
  Jet& operator*=(double v);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double a, const Jet& b);

  bool bitwise_equal(const Jet& o) const { return c_ == o.c_ && dim_ == o.dim_; }

 private:
  static void check_dim(int dim);
  int dim_;
  std::array<double, kCoeffs> c_;
};

// Elementary functions composed through the truncated Taylor algebra.
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);    // requires value > 0
Jet sqrt(const Jet& a);   // requires value > 0
Jet recip(const Jet& a);  // requires value != 0
// Non-integer exponents require a positive base; integer exponents are
// routed through repeated multiplication and accept any base.
Jet pow(const Jet& a, double p);

namespace jets {

// Multi-index table shared by the jet kernel and code that scatters
// derivative data into jets (spectral grids, radial potentials).
struct MultiIndex {
  std::uint8_t a, b, c;
  int degree() const { return a + b + c; }
};

constexpr int kNumCoeffs = Jet::kCoeffs;
const std::array<MultiIndex, kNumCoeffs>& index_table();
int index_of(int a, int b, int c);  // -1 when |alpha| > 4
int coeff_count(int order);         // coefficients with degree <= order

}  // namespace jets

// Scoped cap on the degree carried by jet products/quotients on this
// thread.  Value-only evaluation passes cap at 2: coefficients above the
// cap come out zero, everything below is exact.  Defaults to 4.
class JetTruncationGuard {
 public:
  explicit JetTruncationGuard(int order);
  ~JetTruncationGuard();
  JetTruncationGuard(const JetTruncationGuard&) = delete;

 private:
  int prev_;
};

}  // namespace curvlab
