#pragma once

// Exact arithmetic in Z[i] and Z[omega] (omega = e(1/3)), the rings that
// contain the values of every character of order 1, 2, 3, 4 or 6.
// Elements are stored as re + im * w with w = i or w = omega.

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace ntlab::characters {

enum class Ring : std::uint8_t { gaussian, eisenstein };

/// Ring holding the d-th roots of unity; throws for d outside {1,2,3,4,6}.
constexpr Ring ring_for_order(unsigned d) {
  switch (d) {
    case 1:
    case 2:
    case 4:
      return Ring::gaussian;
    case 3:
    case 6:
      return Ring::eisenstein;
    default:
      throw std::invalid_argument("no exact ring for this character order");
  }
}

constexpr bool has_exact_ring(unsigned d) {
  return d == 1 || d == 2 || d == 3 || d == 4 || d == 6;
}

struct CycloInt {
  std::int64_t re = 0;
  std::int64_t im = 0;
  Ring ring = Ring::gaussian;

  static constexpr CycloInt integer(std::int64_t v, Ring r) { return {v, 0, r}; }

  /// zeta_d^e for d in {1,2,3,4,6}.
  static constexpr CycloInt root_of_unity(unsigned d, std::uint64_t e) {
    const Ring r = ring_for_order(d);
    const unsigned k = static_cast<unsigned>(e % d);
    switch (d) {
      case 1:
        return {1, 0, r};
      case 2:
        return {k == 0 ? 1 : -1, 0, r};
      case 4: {
        constexpr std::int64_t t[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return {t[k][0], t[k][1], r};
      }
      case 3: {
        constexpr std::int64_t t[3][2] = {{1, 0}, {0, 1}, {-1, -1}};
        return {t[k][0], t[k][1], r};
      }
      default: {  // 6: zeta_6 = 1 + omega
        constexpr std::int64_t t[6][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
        return {t[k][0], t[k][1], r};
      }
    }
  }

  constexpr CycloInt& operator+=(const CycloInt& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  constexpr CycloInt& operator-=(const CycloInt& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend constexpr CycloInt operator+(CycloInt a, const CycloInt& b) { return a += b; }
  friend constexpr CycloInt operator-(CycloInt a, const CycloInt& b) { return a -= b; }
  friend constexpr CycloInt operator*(std::int64_t s, CycloInt a) {
    a.re *= s;
    a.im *= s;
    return a;
  }

  friend constexpr CycloInt operator*(const CycloInt& a, const CycloInt& b) {
    if (a.ring == Ring::gaussian) return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, a.ring};
    // omega^2 = -1 - omega
    const std::int64_t w2 = a.im * b.im;
    return {a.re * b.re - w2, a.re * b.im + a.im * b.re - w2, a.ring};
  }

  constexpr CycloInt conj() const {
    if (ring == Ring::gaussian) return {re, -im, ring};
    return {re - im, -im, ring};
  }

  /// |z|^2, always an integer.
  constexpr std::int64_t norm() const {
    if (ring == Ring::gaussian) return re * re + im * im;
    return re * re - re * im + im * im;
  }

  std::complex<double> to_complex() const {
    if (ring == Ring::gaussian) return {static_cast<double>(re), static_cast<double>(im)};
    constexpr double h = 0.86602540378443864676;  // sqrt(3)/2
    return {static_cast<double>(re) - 0.5 * static_cast<double>(im), h * static_cast<double>(im)};
  }

  constexpr bool is_integer() const { return im == 0; }

  friend constexpr bool operator==(const CycloInt& a, const CycloInt& b) {
    return a.re == b.re && a.im == b.im;
  }
};

}  // namespace ntlab::characters
