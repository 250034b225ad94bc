#pragma once

// Dirichlet characters of order dividing d to a prime modulus p, their
// partial sums, and the mean-value statistics built from them.
//
// With g the smallest primitive root mod p, the characters are
//   chi_j(a) = e(j * ind_g(a) / d),  j = 0, ..., d-1,
// chi_0 being principal. Values are exact CycloInt elements whenever
// d is in {1, 2, 3, 4, 6}; complex doubles are available for any d.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ntlab/arith.hpp"
#include "ntlab/cyclotomic.hpp"

namespace ntlab::characters {

using u64 = std::uint64_t;
using i64 = std::int64_t;

class CharacterTable {
 public:
  /// Throws std::invalid_argument if p is not prime or d does not divide p-1.
  CharacterTable(u64 p, unsigned d);

  u64 modulus() const { return p_; }
  unsigned order() const { return d_; }
  u64 generator() const { return index_.root(); }
  bool exact() const { return has_exact_ring(d_); }

  /// ind_g(a); throws when p | a.
  u64 index(i64 a) const { return index_(a); }
  /// ind_g(a) mod d; throws when p | a.
  unsigned exponent_class(i64 a) const { return static_cast<unsigned>(index_(a) % d_); }

  /// chi_j(a), zero when p | a. Requires exact().
  CycloInt value(unsigned j, i64 a) const;
  std::complex<double> value_complex(unsigned j, i64 a) const;

 private:
  u64 p_;
  unsigned d_;
  arith::DiscreteLog index_;
};

CharacterTable build_table(u64 p, unsigned d);

/// (1/d) sum_j chi_j(a), evaluated exactly: 1 iff a is a d-th power mod p.
/// Throws when p | a.
int orthogonality_indicator(const CharacterTable& table, i64 a);

/// sum_{M < n <= M+N} chi_j(n).
CycloInt char_partial_sum(const CharacterTable& table, unsigned j, u64 M, u64 N);

/// ind_g(a) mod d for every a in [1, n], n < p, built from the values at
/// primes q <= n (q^{(p-1)/d} = h^{class}) and complete additivity of the
/// class over the smallest-factor table. out[0] is unused.
void exponent_classes(u64 p, unsigned d, u64 g, u64 n, const arith::SmallestFactorTable& spf,
                      std::vector<std::uint8_t>& out);

struct PolyaVinogradovReport {
  u64 p = 0;
  unsigned d = 0;
  double max_ratio = 0.0;
  std::int64_t max_norm = 0;  // |partial sum|^2 at the witness
  unsigned j = 0;
  u64 M = 0;
  u64 N = 0;
};

/// Maximum over non-principal chi_j of the table and every window
/// 0 <= M < p, 1 <= N <= p of |sum_{M<n<=M+N} chi(n)| / (6 sqrt(p) log p).
PolyaVinogradovReport polya_vinogradov_check(u64 p, unsigned d);

/// Which real characters chi(n) = (D/n), |D| <= X, are summed over.
enum class DiscriminantConvention {
  fundamental,  // fundamental discriminants D != 1, both signs
  nonsquare,    // every non-square D with 1 <= |D| <= X
};

struct JutilaReport {
  u64 characters = 0;
  u64 lhs_exact = 0;
  double lhs = 0.0;
  double bound_ratio = 0.0;  // lhs / (X Y log^2 X)
};

bool is_fundamental_discriminant(i64 D);

JutilaReport jutila_statistic(u64 X, u64 Y, DiscriminantConvention convention);

struct LargeSieveReport {
  u64 moduli = 0;
  u64 characters = 0;
  i64 lhs_exact = 0;
  double lhs = 0.0;
  double coefficient_energy = 0.0;  // sum |a_m|^2
  double envelope = 0.0;
  double ratio = 0.0;
};

/// Large-sieve sum over primes q in (Q, 2Q] with q = 1 mod k and the k-1
/// non-principal characters with chi^k = chi_0:
///   sum_q sum_chi |sum_{M < m <= 2M} a_m chi(m)|^2.
/// coeffs[i] is a_m for m = M + 1 + i (so coeffs.size() == M); non-zero
/// coefficients on non-squarefree m are rejected. k must be 3, 4 or 6.
LargeSieveReport large_sieve_statistic(u64 Q, u64 M, unsigned k, std::span<const i64> coeffs);

/// min{Q^{5/3}+M, Q^{4/3}+Q^{1/2}M, Q^{11/9}+Q^{2/3}M, Q+Q^{1/3}M^{5/3}+M^{12/5}}
double large_sieve_envelope(double Q, double M);

struct PrimeCharSumReport {
  CycloInt sum{};
  std::complex<double> value{};
  double grh_ratio = 0.0;  // |sum| / (sqrt(X) log(qX))
};

/// sum_{p <= X} chi_j(p). Report only: the comparison scale is
/// conditional on GRH.
PrimeCharSumReport prime_char_sum_statistic(const CharacterTable& table, unsigned j, double X);

}  // namespace ntlab::characters
