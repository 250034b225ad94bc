#pragma once

// Exact multiplicative-arithmetic kernels: modular powers, quadratic
// symbols, square-part decompositions, Moebius, primitive roots, discrete
// logarithms and the two real-valued prime-counting scales li(x) and
// sum_{p <= x} 1/p.
//
// Every modular routine accepts moduli below 2^63 and widens products to
// 128 bits, so no big-integer type is ever needed in the hot loops.

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace ntlab::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// a * b mod n without overflow.
inline u64 mulmod(u64 a, u64 b, u64 n) {
  if (n <= (u64{1} << 32)) return (a % n) * (b % n) % n;
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % n);
}

/// Reduces a signed value into [0, n).
inline u64 reduce(i64 a, u64 n) {
  if (a >= 0) return static_cast<u64>(a) % n;
  const u64 r = static_cast<u64>(-(a + 1)) % n;  // avoids negating INT64_MIN
  return n - 1 - r;
}

/// a^e mod n by square-and-multiply. powmod(a, 0, 1) is 0 since every
/// residue mod 1 is 0.
u64 powmod(i64 a, u64 e, u64 n);

/// Jacobi symbol (a/n) for odd n >= 1. Throws std::invalid_argument on
/// even or non-positive n.
int jacobi(i64 a, i64 n);

/// Kronecker symbol (a/n), the usual extension of the Jacobi symbol to
/// all integers n:
///   (a/0)  = 1 if a = +-1, else 0
///   (a/-1) = -1 if a < 0, else 1
///   (a/2)  = 0 if a is even, 1 if a = +-1 mod 8, -1 if a = +-3 mod 8
/// and complete multiplicativity in n.
int kronecker(i64 a, i64 n);

/// Floor square root.
u64 isqrt(u64 n);
/// True for 0, 1, 4, 9, ...; negative values are never squares.
bool is_square(i64 a);

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Trial-division factorization (ascending primes). factorize(1) is empty.
std::vector<PrimePower> factorize(u64 n);

/// Deterministic Miller-Rabin for all 64-bit n.
bool is_prime(u64 n);

u64 euler_phi(u64 n);
int mobius(u64 a);
bool is_squarefree(u64 a);

/// Both ways of splitting a positive integer around its square part:
///   a = l_sf * sq^2     with l_sf squarefree,
///   a = core_l^2 * core_m with core_m squarefree.
struct SquarePartDecomposition {
  u64 a = 1;
  u64 l_sf = 1;
  u64 sq = 1;
  u64 core_m = 1;
  u64 core_l = 1;
  friend bool operator==(const SquarePartDecomposition&,
                         const SquarePartDecomposition&) = default;
};

SquarePartDecomposition square_part(u64 a);

/// Smallest-prime-factor table on [0, limit] for bulk factorization.
class SmallestFactorTable {
 public:
  explicit SmallestFactorTable(u64 limit);

  u64 limit() const { return limit_; }
  /// spf(0) = spf(1) = 0.
  u64 spf(u64 n) const { return spf_[n]; }
  std::vector<PrimePower> factorize(u64 n) const;
  SquarePartDecomposition square_part(u64 a) const;
  int mobius(u64 a) const;

 private:
  u64 limit_;
  std::vector<std::uint32_t> spf_;
};

/// epsilon(d) of Hooley's main term: 2 iff the squarefree part l of a
/// (a = l m^2, l carrying the sign of a) satisfies l = 1 mod 4 and 2l | d.
/// Throws std::invalid_argument when a = -1, a is a square, or d is not a
/// positive squarefree integer.
int epsilon_d(i64 a, u64 d);

/// Smallest positive primitive root of an odd prime p (also p = 2 -> 1).
/// Throws std::invalid_argument when p is not prime.
u64 primitive_root(u64 p);

/// Index (discrete logarithm) to a fixed primitive root g mod p.
/// A full table is built for p <= kTableLimit; baby-step giant-step above.
class DiscreteLog {
 public:
  static constexpr u64 kTableLimit = u64{1} << 20;

  DiscreteLog(u64 p, u64 g);

  u64 modulus() const { return p_; }
  u64 root() const { return g_; }
  bool uses_table() const { return !table_.empty(); }

  /// k in [0, p-1) with g^k = a mod p. Throws std::invalid_argument when
  /// p | a.
  u64 operator()(i64 a) const;

 private:
  u64 p_;
  u64 g_;
  std::vector<std::uint32_t> table_;
  // BSGS state
  u64 giant_step_count_ = 0;
  u64 giant_factor_ = 1;  // g^{-m}
  std::unordered_map<u64, u64> baby_steps_;
};

u64 discrete_log(u64 p, u64 g, i64 a);

/// Logarithmic integral (principal value) for x > 1 via Ramanujan's
/// series. Throws std::domain_error for x <= 1.
double li(double x);
/// Same quantity by adaptive quadrature of
///   li(x) = gamma + log log x + int_0^{log x} (e^u - 1)/u du.
double li_quadrature(double x);

/// sum_{p <= x} 1/p, accumulated in ascending prime order. 0 for x < 2.
double mertens_sum(double x);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kMertensConstant = 0.26149721284764278375542683860869585;

}  // namespace ntlab::arith
