#pragma once

// Truncated Taylor arithmetic in the time variable.
//
// A Jet stores normalized Taylor coefficients c[k] = f^(k)(t)/k! for
// k = 0..kOrder. Products, quotients, exp, log and real powers follow the
// usual coefficient recurrences, so derivatives of composite coefficients
// are exact up to rounding. Coefficients that are unknown after
// differentiation are NaN, which poisons only the orders that depend on them.
//
// Scaled carries an extra power-of-two exponent so that quantities such as
// p(t)^{2r} b(t)^{-2/3} with exponential b can be composed without overflow.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace inertia {

struct Jet {
  static constexpr int kOrder = 5;
  std::array<double, kOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  // The identity function t -> t expanded at t.
  static Jet variable(double t) {
    Jet j;
    j.c[0] = t;
    j.c[1] = 1.0;
    return j;
  }
  // Build from derivatives f, f', f'', ... (missing orders are zero).
  static Jet from_derivatives(std::initializer_list<double> ds) {
    Jet j;
    double fact = 1.0;
    int k = 0;
    for (double d : ds) {
      if (k > kOrder) break;
      if (k > 0) fact *= k;
      j.c[k] = d / fact;
      ++k;
    }
    return j;
  }

  double value() const { return c[0]; }
  // k-th derivative.
  double d(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[k] * fact;
  }
  Jet derivative() const {
    Jet r;
    for (int k = 0; k < kOrder; ++k) r.c[k] = (k + 1) * c[k + 1];
    r.c[kOrder] = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : c)
      if (std::isfinite(x)) m = std::max(m, std::abs(x));
    return m;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k <= kOrder; ++k) r.c[k] = -c[k];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= kOrder; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= kOrder; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator+(Jet a, double s) {
  a.c[0] += s;
  return a;
}
inline Jet operator+(double s, Jet a) { return a + s; }
inline Jet operator-(Jet a, double s) { return a + (-s); }
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= Jet::kOrder; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= Jet::kOrder; ++k) {
    double s = a.c[k];
    for (int i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
    r.c[k] = s / b.c[0];
  }
  return r;
}
inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
inline Jet operator/(double s, const Jet& a) { return Jet::constant(s) / a; }

inline Jet exp(const Jet& a) {
  Jet r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c[i] * r.c[k - i];
    r.c[k] = s / k;
  }
  return r;
}

inline Jet log(const Jet& a) {
  Jet r;
  r.c[0] = std::log(a.c[0]);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = a.c[k];
    for (int i = 1; i < k; ++i) s -= (static_cast<double>(i) / k) * r.c[i] * a.c[k - i];
    r.c[k] = s / a.c[0];
  }
  return r;
}

// a^p for real p; needs a.c[0] != 0 (and > 0 unless p is an integer).
inline Jet pow(const Jet& a, double p) {
  Jet r;
  r.c[0] = std::pow(a.c[0], p);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += ((p + 1.0) * i - k) * a.c[i] * r.c[k - i];
    r.c[k] = s / (k * a.c[0]);
  }
  return r;
}

// 2^e2 * j. Exponent shifts are exact, so values that fit in a double are
// bit-identical to plain Jet arithmetic.
struct Scaled {
  long e2 = 0;
  Jet j;

  Scaled() = default;
  Scaled(const Jet& jet) : j(jet) { renormalize(); }  // NOLINT: implicit by design
  Scaled(long e, const Jet& jet) : e2(e), j(jet) { renormalize(); }

  static Scaled constant(double v) { return Scaled(Jet::constant(v)); }

  // Keep coefficients inside a comfortable exponent range.
  void renormalize() {
    double m = j.max_abs();
    if (m == 0.0 || !std::isfinite(m)) return;
    int ex = 0;
    std::frexp(m, &ex);
    if (ex > 300 || ex < -300) {
      for (double& x : j.c) x = std::ldexp(x, -ex);
      e2 += ex;
    }
  }

  Jet to_jet() const {
    Jet r = j;
    if (e2 != 0) {
      long e = std::clamp<long>(e2, -4000, 4000);
      for (double& x : r.c) x = std::ldexp(x, static_cast<int>(e));
    }
    return r;
  }
  double value() const { return to_jet().c[0]; }
  double d(int k) const { return to_jet().d(k); }
  // log|f| at the expansion point.
  double log_abs() const { return std::log(std::abs(j.c[0])) + e2 * std::log(2.0); }
  int sign() const { return (j.c[0] > 0) - (j.c[0] < 0); }
  bool is_zero() const { return j.max_abs() == 0.0; }

  Scaled derivative() const { return Scaled(e2, j.derivative()); }
  Scaled operator-() const { return Scaled(e2, -j); }
};

namespace detail {
inline Jet shifted(const Jet& a, long by) {
  Jet r = a;
  if (by < -2000) return Jet{};
  for (double& x : r.c) x = std::ldexp(x, static_cast<int>(by));
  return r;
}
}  // namespace detail

inline Scaled operator+(const Scaled& a, const Scaled& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.e2 >= b.e2) return Scaled(a.e2, a.j + detail::shifted(b.j, b.e2 - a.e2));
  return Scaled(b.e2, detail::shifted(a.j, a.e2 - b.e2) + b.j);
}
inline Scaled operator-(const Scaled& a, const Scaled& b) { return a + (-b); }
inline Scaled operator*(const Scaled& a, const Scaled& b) { return Scaled(a.e2 + b.e2, a.j * b.j); }
inline Scaled operator/(const Scaled& a, const Scaled& b) { return Scaled(a.e2 - b.e2, a.j / b.j); }
inline Scaled operator*(const Scaled& a, double s) { return Scaled(a.e2, a.j * s); }
inline Scaled operator*(double s, const Scaled& a) { return a * s; }

// exp of a jet, with the integer part of the exponent carried in e2.
inline Scaled exp_scaled(const Jet& a) {
  static const double kLn2 = std::log(2.0);
  double v = a.c[0];
  if (!std::isfinite(v)) return Scaled(exp(a));
  long e = static_cast<long>(std::floor(v / kLn2));
  Jet shifted = a;
  shifted.c[0] = v - static_cast<double>(e) * kLn2;
  Scaled r;
  r.e2 = e;
  r.j = exp(shifted);
  r.renormalize();
  return r;
}

inline Jet log(const Scaled& a) {
  Jet r = log(a.j);
  r.c[0] += a.e2 * std::log(2.0);
  return r;
}

// a^p for a > 0.
inline Scaled pow(const Scaled& a, double p) { return exp_scaled(log(a) * p); }

// Ratio of two scaled values as a plain double.
inline double ratio(const Scaled& a, const Scaled& b) {
  long de = a.e2 - b.e2;
  double q = a.j.c[0] / b.j.c[0];
  if (de > 2000) return q * std::numeric_limits<double>::infinity();
  if (de < -2000) return 0.0 * q;
  return std::ldexp(q, static_cast<int>(de));
}

}  // namespace inertia
