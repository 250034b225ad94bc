#include "ntlab/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ntlab/primes.hpp"

namespace ntlab::characters {

namespace {

arith::DiscreteLog make_index(u64 p, unsigned d) {
  if (!arith::is_prime(p))
    throw std::invalid_argument("CharacterTable: modulus " + std::to_string(p) + " is not prime");
  if (d == 0 || (p - 1) % d != 0)
    throw std::invalid_argument("CharacterTable: order " + std::to_string(d) +
                                " does not divide p - 1");
  return arith::DiscreteLog(p, arith::primitive_root(p));
}

}  // namespace

CharacterTable::CharacterTable(u64 p, unsigned d) : p_(p), d_(d), index_(make_index(p, d)) {}

CycloInt CharacterTable::value(unsigned j, i64 a) const {
  const Ring ring = ring_for_order(d_);
  if (arith::reduce(a, p_) == 0) return CycloInt::integer(0, ring);
  return CycloInt::root_of_unity(d_, static_cast<u64>(j % d_) * exponent_class(a));
}

std::complex<double> CharacterTable::value_complex(unsigned j, i64 a) const {
  if (arith::reduce(a, p_) == 0) return {0.0, 0.0};
  if (exact()) return value(j, a).to_complex();
  const u64 e = (static_cast<u64>(j % d_) * exponent_class(a)) % d_;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / d_;
  return {std::cos(angle), std::sin(angle)};
}

CharacterTable build_table(u64 p, unsigned d) { return CharacterTable(p, d); }

int orthogonality_indicator(const CharacterTable& table, i64 a) {
  if (arith::reduce(a, table.modulus()) == 0)
    throw std::invalid_argument("orthogonality_indicator: p divides a");
  const unsigned d = table.order();
  CycloInt total = CycloInt::integer(0, ring_for_order(d));
  for (unsigned j = 0; j < d; ++j) total += table.value(j, a);
  if (!total.is_integer() || total.re % d != 0)
    throw std::logic_error("orthogonality_indicator: character sum is not a multiple of d");
  return static_cast<int>(total.re / d);
}

CycloInt char_partial_sum(const CharacterTable& table, unsigned j, u64 M, u64 N) {
  const u64 p = table.modulus();
  CycloInt total = CycloInt::integer(0, ring_for_order(table.order()));
  // complete periods contribute sum_{a mod p} chi_j(a), which is 0 unless j = 0
  const u64 periods = N / p;
  if (periods > 0 && j % table.order() == 0)
    total += static_cast<i64>(periods * (p - 1)) * CycloInt::integer(1, total.ring);
  const u64 rest = N % p;
  u64 n = M % p;
  for (u64 i = 0; i < rest; ++i) {
    n = (n + 1 == p) ? 0 : n + 1;
    total += table.value(j, static_cast<i64>(n));
  }
  return total;
}

void exponent_classes(u64 p, unsigned d, u64 g, u64 n, const arith::SmallestFactorTable& spf,
                      std::vector<std::uint8_t>& out) {
  if (n >= p) throw std::invalid_argument("exponent_classes: range must stay below p");
  if (n > spf.limit()) throw std::invalid_argument("exponent_classes: factor table too small");
  out.assign(n + 1, 0);
  const u64 step = (p - 1) / d;
  std::uint64_t roots[6] = {};
  if (d != 2) {
    const u64 h = arith::powmod(static_cast<i64>(g), step, p);
    roots[0] = 1;
    for (unsigned e = 1; e < d; ++e) roots[e] = arith::mulmod(roots[e - 1], h, p);
  }
  for (u64 a = 2; a <= n; ++a) {
    const u64 q = spf.spf(a);
    if (q == a) {
      if (d == 2) {
        out[a] = arith::jacobi(static_cast<i64>(a), static_cast<i64>(p)) == 1 ? 0 : 1;
      } else {
        const u64 r = arith::powmod(static_cast<i64>(a), step, p);
        unsigned e = 0;
        while (roots[e] != r) ++e;
        out[a] = static_cast<std::uint8_t>(e);
      }
    } else {
      const unsigned e = out[q] + out[a / q];
      out[a] = static_cast<std::uint8_t>(e >= d ? e - d : e);
    }
  }
}

PolyaVinogradovReport polya_vinogradov_check(u64 p, unsigned d) {
  const CharacterTable table(p, d);
  PolyaVinogradovReport report;
  report.p = p;
  report.d = d;
  const Ring ring = ring_for_order(d);
  std::vector<unsigned> cls(p, 0);
  for (u64 a = 1; a < p; ++a) cls[a] = table.exponent_class(static_cast<i64>(a));
  std::vector<CycloInt> prefix(p);
  for (unsigned j = 1; j < d; ++j) {
    // prefix[u] = sum_{1 <= n <= u} chi_j(n), periodic with period p
    prefix[0] = CycloInt::integer(0, ring);
    for (u64 u = 1; u < p; ++u)
      prefix[u] = prefix[u - 1] + CycloInt::root_of_unity(d, static_cast<u64>(j) * cls[u]);
    for (u64 u = 0; u < p; ++u) {
      for (u64 v = u + 1; v < p; ++v) {
        const std::int64_t nrm = (prefix[v] - prefix[u]).norm();
        if (nrm > report.max_norm) {
          report.max_norm = nrm;
          report.j = j;
          report.M = u;
          report.N = v - u;
        }
      }
    }
  }
  // |P(v) - P(u)| = |P(u) - P(v)| also covers windows wrapping past p
  const double scale = 6.0 * std::sqrt(static_cast<double>(p)) * std::log(static_cast<double>(p));
  report.max_ratio = std::sqrt(static_cast<double>(report.max_norm)) / scale;
  return report;
}

bool is_fundamental_discriminant(i64 D) {
  if (D == 0 || D == 1) return false;
  const u64 mag = D < 0 ? static_cast<u64>(-D) : static_cast<u64>(D);
  const u64 r = arith::reduce(D, 4);
  if (r == 1) return arith::is_squarefree(mag);
  if (r != 0) return false;
  const i64 m = D / 4;
  const u64 rm = arith::reduce(m, 4);
  if (rm != 2 && rm != 3) return false;
  return arith::is_squarefree(mag / 4);
}

JutilaReport jutila_statistic(u64 X, u64 Y, DiscriminantConvention convention) {
  if (X < 1 || Y < 1) throw std::invalid_argument("jutila_statistic: X and Y must be positive");
  JutilaReport report;
  for (i64 mag = 1; mag <= static_cast<i64>(X); ++mag) {
    for (i64 D : {mag, -mag}) {
      const bool included = convention == DiscriminantConvention::fundamental
                                ? is_fundamental_discriminant(D)
                                : !arith::is_square(D);
      if (!included) continue;
      ++report.characters;
      i64 s = 0;
      for (u64 n = 1; n <= Y; ++n) s += arith::kronecker(D, static_cast<i64>(n));
      report.lhs_exact += static_cast<u64>(s * s);
    }
  }
  report.lhs = static_cast<double>(report.lhs_exact);
  const double lx = std::log(static_cast<double>(X));
  const double scale = static_cast<double>(X) * static_cast<double>(Y) * lx * lx;
  report.bound_ratio = scale > 0.0 ? report.lhs / scale : 0.0;
  return report;
}

double large_sieve_envelope(double Q, double M) {
  const double a = std::pow(Q, 5.0 / 3.0) + M;
  const double b = std::pow(Q, 4.0 / 3.0) + std::sqrt(Q) * M;
  const double c = std::pow(Q, 11.0 / 9.0) + std::pow(Q, 2.0 / 3.0) * M;
  const double e = Q + std::cbrt(Q) * std::pow(M, 5.0 / 3.0) + std::pow(M, 12.0 / 5.0);
  return std::min({a, b, c, e});
}

LargeSieveReport large_sieve_statistic(u64 Q, u64 M, unsigned k, std::span<const i64> coeffs) {
  if (k != 3 && k != 4 && k != 6)
    throw std::invalid_argument("large_sieve_statistic: k must be 3, 4 or 6");
  if (coeffs.size() != M)
    throw std::invalid_argument("large_sieve_statistic: need exactly M coefficients");
  LargeSieveReport report;
  for (u64 i = 0; i < M; ++i) {
    if (coeffs[i] == 0) continue;
    const u64 m = M + 1 + i;
    if (!arith::is_squarefree(m))
      throw std::invalid_argument("large_sieve_statistic: coefficient on non-squarefree m = " +
                                  std::to_string(m));
    report.coefficient_energy += static_cast<double>(coeffs[i]) * static_cast<double>(coeffs[i]);
  }
  const Ring ring = ring_for_order(k);
  primes::PrimeRange range{Q + 1, 2 * Q + 1, primes::ResidueFilter{k, 1}};
  primes::stream_primes(range, [&](u64 q) {
    const CharacterTable table(q, k);
    ++report.moduli;
    std::vector<unsigned> cls(M, 0);
    std::vector<bool> unit(M, false);
    for (u64 i = 0; i < M; ++i) {
      const u64 m = M + 1 + i;
      if (coeffs[i] == 0 || m % q == 0) continue;
      unit[i] = true;
      cls[i] = table.exponent_class(static_cast<i64>(m));
    }
    for (unsigned j = 1; j < k; ++j) {
      ++report.characters;
      CycloInt s = CycloInt::integer(0, ring);
      for (u64 i = 0; i < M; ++i) {
        if (!unit[i]) continue;
        s += coeffs[i] * CycloInt::root_of_unity(k, static_cast<u64>(j) * cls[i]);
      }
      report.lhs_exact += s.norm();
    }
  });
  report.lhs = static_cast<double>(report.lhs_exact);
  report.envelope = large_sieve_envelope(static_cast<double>(Q), static_cast<double>(M)) *
                    report.coefficient_energy;
  report.ratio = report.envelope > 0.0 ? report.lhs / report.envelope : 0.0;
  return report;
}

PrimeCharSumReport prime_char_sum_statistic(const CharacterTable& table, unsigned j, double X) {
  PrimeCharSumReport report;
  const unsigned d = table.order();
  report.sum = CycloInt::integer(0, table.exact() ? ring_for_order(d) : Ring::gaussian);
  if (X < 2.0) return report;
  const u64 limit = static_cast<u64>(std::floor(X));
  primes::stream_primes(primes::PrimeRange{2, limit + 1}, [&](u64 p) {
    if (table.exact()) report.sum += table.value(j, static_cast<i64>(p));
    else report.value += table.value_complex(j, static_cast<i64>(p));
  });
  if (table.exact()) report.value = report.sum.to_complex();
  const double scale = std::sqrt(X) * std::log(static_cast<double>(table.modulus()) * X);
  report.grh_ratio = std::abs(report.value) / scale;
  return report;
}

}  // namespace ntlab::characters
