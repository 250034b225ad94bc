#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ntlab/characters.hpp"
#include "ntlab/residue.hpp"
#include "oracles.hpp"

using namespace ntlab::characters;

TEST_CASE("table construction") {
  CHECK_THROWS_AS(CharacterTable(15, 2), std::invalid_argument);
  CHECK_THROWS_AS(CharacterTable(7, 4), std::invalid_argument);
  const auto t = build_table(7, 2);
  CHECK(t.generator() == 3);
  for (i64 a = 0; a < 7; ++a) CHECK(t.value(1, a).re == oracle::legendre(a, 7));
}

TEST_CASE("worked examples") {
  const CharacterTable t7(7, 3);
  CHECK(t7.index(2) == 2);
  CHECK(t7.value(1, 2) == CycloInt::root_of_unity(3, 2));
  const CharacterTable t13(13, 4);
  CHECK(t13.value(1, 5) * t13.value(1, 5) == t13.value(2, 5));
  CHECK(t13.value(2, 5) == CycloInt::integer(-1, Ring::gaussian));

  CHECK(orthogonality_indicator(t7, 1) == 1);
  CHECK(orthogonality_indicator(t7, 3) == 0);
  CHECK(orthogonality_indicator(t7, 6) == 1);
  CHECK_THROWS_AS(orthogonality_indicator(t7, 14), std::invalid_argument);
}

TEST_CASE("character values match the slow definition") {
  for (u64 p : oracle::primes_upto(120)) {
    if (p < 3) continue;
    for (unsigned d : {2u, 3u, 4u, 6u}) {
      if ((p - 1) % d) continue;
      const CharacterTable t(p, d);
      for (unsigned j = 0; j < d; ++j) {
        const auto ref = oracle::chi_table(p, d, j);
        for (u64 a = 0; a < 2 * p; ++a) {
          const auto exact = t.value(j, static_cast<i64>(a)).to_complex();
          REQUIRE(std::abs(exact - ref[a % p]) < 1e-12);
          REQUIRE(std::abs(t.value_complex(j, static_cast<i64>(a)) - exact) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("multiplicativity and powers, p <= 200") {
  for (u64 p : oracle::primes_upto(200)) {
    if (p < 3) continue;
    for (unsigned d : {2u, 3u, 4u, 6u}) {
      if ((p - 1) % d) continue;
      const CharacterTable t(p, d);
      const auto one = CycloInt::integer(1, ring_for_order(d));
      for (unsigned j = 0; j < d; ++j) {
        for (i64 m = 1; m < static_cast<i64>(p); ++m)
          for (i64 n = 1; n < static_cast<i64>(p); ++n)
            REQUIRE(t.value(j, m * n) == t.value(j, m) * t.value(j, n));
        for (i64 a = 1; a < static_cast<i64>(p); ++a) {
          CycloInt pw = one;
          for (unsigned i = 0; i < j; ++i) pw = pw * t.value(1, a);
          REQUIRE(t.value(j, a) == pw);
          REQUIRE(t.value(j, a) * t.value((d - j) % d, a) == one);
        }
      }
      if (d == 2)
        for (i64 a = 0; a < static_cast<i64>(p); ++a) REQUIRE(t.value(1, a).re == oracle::legendre(a, p));
    }
  }
}

TEST_CASE("orthogonality indicator agrees with the Euler criterion, p <= 2000") {
  for (u64 p : oracle::primes_upto(2000)) {
    if (p < 3) continue;
    for (unsigned d : {2u, 3u, 4u, 6u}) {
      if ((p - 1) % d) continue;
      const CharacterTable t(p, d);
      for (u64 a = 1; a < p; ++a)
        REQUIRE((orthogonality_indicator(t, static_cast<i64>(a)) == 1) ==
                ntlab::residue::is_dth_power_residue(static_cast<i64>(a), p, d));
    }
  }
}

TEST_CASE("exponent classes from the factor table") {
  const ntlab::arith::SmallestFactorTable spf(5000);
  std::vector<std::uint8_t> cls;
  for (u64 p : {7u, 13u, 37u, 61u, 1009u, 4999u, 100003u}) {
    for (unsigned d : {2u, 3u, 4u, 6u}) {
      if ((p - 1) % d) continue;
      const CharacterTable t(p, d);
      const u64 n = std::min<u64>(p - 1, 5000);
      exponent_classes(p, d, d == 2 ? 0 : t.generator(), n, spf, cls);
      for (u64 a = 1; a <= n; ++a) REQUIRE(cls[a] == t.exponent_class(static_cast<i64>(a)));
    }
  }
  CHECK_THROWS_AS(exponent_classes(7, 2, 0, 7, spf, cls), std::invalid_argument);
}

TEST_CASE("partial sums") {
  const CharacterTable t(7, 2);
  CHECK(char_partial_sum(t, 1, 0, 7) == CycloInt::integer(0, Ring::gaussian));
  CHECK(char_partial_sum(t, 1, 0, 3) == CycloInt::integer(1, Ring::gaussian));
  for (u64 p : {13u, 31u, 37u}) {
    for (unsigned d : {3u, 4u, 6u}) {
      if ((p - 1) % d) continue;
      const CharacterTable tt(p, d);
      for (unsigned j = 1; j < d; ++j)
        for (u64 M = 0; M < 2 * p; M += 5)
          for (u64 N = 1; N < 3 * p; N += 7) {
            CycloInt ref = CycloInt::integer(0, ring_for_order(d));
            for (u64 n = M + 1; n <= M + N; ++n) ref += tt.value(j, static_cast<i64>(n));
            REQUIRE(char_partial_sum(tt, j, M, N) == ref);
            REQUIRE(char_partial_sum(tt, d - j, M, N) == ref.conj());
          }
      REQUIRE(char_partial_sum(tt, 1, 3, p) == CycloInt::integer(0, ring_for_order(d)));
    }
  }
}

TEST_CASE("Polya-Vinogradov") {
  const auto r3 = polya_vinogradov_check(3, 2);
  CHECK(r3.max_norm == 1);
  CHECK(r3.max_ratio == doctest::Approx(1.0 / (6 * std::sqrt(3.0) * std::log(3.0))));
  CHECK(r3.max_ratio == doctest::Approx(0.0876).epsilon(1e-3));

  for (u64 p : oracle::primes_upto(80)) {
    if (p < 3) continue;
    for (unsigned d : {2u, 3u, 4u, 6u}) {
      if ((p - 1) % d) continue;
      double best = 0;
      for (unsigned j = 1; j < d; ++j) {
        const auto ref = oracle::chi_table(p, d, j);
        for (u64 M = 0; M < p; ++M)
          for (u64 N = 1; N <= p; ++N) {
            std::complex<double> s = 0;
            for (u64 n = M + 1; n <= M + N; ++n) s += ref[n % p];
            best = std::max(best, std::abs(s));
          }
      }
      const auto r = polya_vinogradov_check(p, d);
      REQUIRE(std::sqrt(static_cast<double>(r.max_norm)) == doctest::Approx(best));
      REQUIRE(r.max_ratio < 1.0);
      // the witness reproduces the maximum
      const CharacterTable t(p, d);
      REQUIRE(char_partial_sum(t, r.j, r.M, r.N).norm() == r.max_norm);
    }
  }
}

TEST_CASE("fundamental discriminants") {
  for (i64 D = -600; D <= 600; ++D) REQUIRE(is_fundamental_discriminant(D) == oracle::is_fundamental(D));
  CHECK(is_fundamental_discriminant(-4));
  CHECK(is_fundamental_discriminant(5));
  CHECK(is_fundamental_discriminant(8));
  CHECK_FALSE(is_fundamental_discriminant(1));
  CHECK_FALSE(is_fundamental_discriminant(-16));
}

TEST_CASE("Jutila statistic") {
  for (auto conv : {DiscriminantConvention::fundamental, DiscriminantConvention::nonsquare}) {
    const auto one = jutila_statistic(50, 1, conv);
    CHECK(one.lhs_exact == one.characters);

    u64 chars = 0;
    u64 lhs = 0;
    for (i64 mag = 1; mag <= 50; ++mag)
      for (i64 D : {mag, -mag}) {
        const bool in = conv == DiscriminantConvention::fundamental
                            ? oracle::is_fundamental(D)
                            : !(D > 0 && ntlab::arith::is_square(D));
        if (!in) continue;
        ++chars;
        i64 s = 0;
        for (u64 n = 1; n <= 50; ++n) s += oracle::kronecker(D, n);
        lhs += static_cast<u64>(s * s);
      }
    const auto r = jutila_statistic(50, 50, conv);
    CHECK(r.characters == chars);
    CHECK(r.lhs_exact == lhs);
    CHECK(r.bound_ratio == doctest::Approx(static_cast<double>(lhs) / (50.0 * 50 * std::pow(std::log(50.0), 2))));
  }
  CHECK_THROWS_AS(jutila_statistic(0, 5, DiscriminantConvention::fundamental), std::invalid_argument);
}

TEST_CASE("large sieve statistic") {
  const std::vector<i64> zeros(20, 0);
  CHECK(large_sieve_statistic(20, 20, 3, zeros).lhs_exact == 0);

  std::vector<i64> single(20, 0);
  single[21 - 21] = 1;  // m = 21
  const auto s = large_sieve_statistic(20, 20, 3, single);
  // q in (20, 40], q = 1 mod 3: 31 and 37, none dividing 21
  CHECK(s.moduli == 2);
  CHECK(s.lhs_exact == 4);

  std::vector<i64> bad(20, 0);
  bad[24 - 21] = 1;  // 24 is not squarefree
  CHECK_THROWS_AS(large_sieve_statistic(20, 20, 3, bad), std::invalid_argument);
  CHECK_THROWS_AS(large_sieve_statistic(20, 20, 5, zeros), std::invalid_argument);

  std::mt19937_64 rng(20);
  for (unsigned k : {3u, 4u, 6u}) {
    std::vector<i64> a(20, 0);
    for (u64 i = 0; i < 20; ++i)
      if (oracle::mobius(21 + i) != 0) a[i] = (rng() & 1) ? 1 : -1;
    double ref = 0;
    for (u64 q = 21; q <= 40; ++q) {
      if (!oracle::is_prime(q) || (q - 1) % k) continue;
      for (unsigned j = 1; j < k; ++j) {
        std::complex<double> t = 0;
        for (u64 i = 0; i < 20; ++i) t += static_cast<double>(a[i]) * oracle::chi(q, k, j, 21 + i);
        ref += std::norm(t);
      }
    }
    const auto r = large_sieve_statistic(20, 20, k, a);
    CHECK(static_cast<double>(r.lhs_exact) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(std::isfinite(r.ratio));
    CHECK(r.envelope == doctest::Approx(large_sieve_envelope(20, 20) * r.coefficient_energy));
  }
}

TEST_CASE("prime character sums") {
  const CharacterTable t(7, 2);
  CHECK(prime_char_sum_statistic(t, 1, 1.5).value == std::complex<double>(0, 0));
  int ref = 0;
  for (u64 p : oracle::primes_upto(100)) ref += oracle::legendre(static_cast<i64>(p), 7);
  const auto r = prime_char_sum_statistic(t, 1, 100);
  CHECK(r.sum.re == ref);
  CHECK(r.grh_ratio == doctest::Approx(std::abs(ref) / (10.0 * std::log(700.0))));
  const CharacterTable t6(1009, 6);
  for (double X : {1e2, 1e4, 1e6}) CHECK(std::isfinite(prime_char_sum_statistic(t6, 1, X).grh_ratio));
}
