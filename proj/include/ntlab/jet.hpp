#pragma once

// Truncated Taylor series f(t0 + h) = sum_k c[k] h^k, k <= N. Arithmetic
// on jets differentiates closed-form expressions exactly (up to rounding):
// the j-th derivative at t0 is j! * c[j].

#include <array>
#include <cmath>
#include <cstddef>

namespace ntlab {

template <std::size_t N>
struct Jet {
  std::array<double, N + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  /// The identity map t -> t expanded at t0.
  static Jet variable(double t0) {
    Jet j;
    j.c[0] = t0;
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }

  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c[k] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t k = 0; k <= N; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t k = 0; k <= N; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c) v = -v;
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& v : a.c) v *= s;
    return a;
  }
  friend Jet operator+(double s, Jet a) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= N; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
      r.c[k] = s;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= N; ++k) {
      double s = a.c[k];
      for (std::size_t i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
};

/// exp of a jet: g' = f' g gives k g_k = sum_{i=1}^k i f_i g_{k-i}.
template <std::size_t N>
Jet<N> exp(const Jet<N>& f) {
  Jet<N> g;
  g.c[0] = std::exp(f.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t i = 1; i <= k; ++i) s += static_cast<double>(i) * f.c[i] * g.c[k - i];
    g.c[k] = s / static_cast<double>(k);
  }
  return g;
}

}  // namespace ntlab
