#include "doctest.h"

#include <cmath>
#include <random>

#include "ntlab/arith.hpp"
#include "oracles.hpp"

using namespace ntlab::arith;

TEST_CASE("powmod examples") {
  CHECK(powmod(5, 0, 7) == 1);
  CHECK(powmod(2, 6, 13) == 12);
  CHECK(powmod(2, 10, 1000) == 24);
  CHECK(powmod(-1, 3, 7) == 6);
  CHECK(powmod(3, 5, 1) == 0);
}

TEST_CASE("mulmod near 2^63") {
  const u64 n = (u64{1} << 61) - 1;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const u64 a = rng() % n;
    const u64 b = rng() % n;
    CHECK(mulmod(a, b, n) == static_cast<u64>(static_cast<unsigned __int128>(a) * b % n));
  }
  CHECK(powmod(3, n - 1, n) == 1);
}

TEST_CASE("Fermat for primes up to 10^4") {
  std::mt19937_64 rng(11);
  for (u64 p : oracle::primes_upto(10000)) {
    for (int i = 0; i < 100; ++i) {
      const u64 a = 1 + rng() % (p - 1);
      REQUIRE(powmod(static_cast<i64>(a), p - 1, p) == 1);
    }
  }
}

TEST_CASE("jacobi") {
  CHECK(jacobi(1, 15) == 1);
  CHECK(jacobi(2, 7) == 1);
  CHECK(jacobi(3, 9) == 0);
  CHECK_THROWS_AS(jacobi(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(jacobi(3, -7), std::invalid_argument);

  for (u64 n = 1; n < 200; n += 2)
    for (i64 a = -250; a <= 250; ++a) REQUIRE(jacobi(a, static_cast<i64>(n)) == oracle::jacobi(a, n));
}

TEST_CASE("Euler criterion for odd primes up to 10^4") {
  for (u64 p : oracle::primes_upto(10000)) {
    if (p == 2) continue;
    for (u64 a = 1; a < p; ++a) {
      const u64 e = powmod(static_cast<i64>(a), (p - 1) / 2, p);
      const int j = jacobi(static_cast<i64>(a), static_cast<i64>(p));
      REQUIRE(((j == 1 && e == 1) || (j == -1 && e == p - 1)));
    }
  }
}

TEST_CASE("kronecker") {
  // (a/2) depends on a mod 8
  for (i64 a = -40; a <= 40; ++a) {
    const i64 r = ((a % 8) + 8) % 8;
    const int expect = (r % 2 == 0) ? 0 : (r == 1 || r == 7) ? 1 : -1;
    REQUIRE(kronecker(a, 2) == expect);
  }
  CHECK(kronecker(5, -1) == 1);
  CHECK(kronecker(-5, -1) == -1);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(-1, 0) == 1);
  CHECK(kronecker(3, 0) == 0);
  // completely multiplicative in the bottom argument
  for (i64 a = -30; a <= 30; ++a)
    for (i64 m = -12; m <= 12; ++m)
      for (i64 n = 1; n <= 12; ++n) {
        if (m == 0) continue;
        REQUIRE(kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n));
      }
  for (i64 a = -50; a <= 50; ++a)
    for (i64 n = 1; n < 60; n += 2) REQUIRE(kronecker(a, n) == jacobi(a, n));
}

TEST_CASE("isqrt and is_square") {
  for (u64 n = 0; n < 100000; ++n) {
    const u64 r = isqrt(n);
    REQUIRE(r * r <= n);
    REQUIRE((r + 1) * (r + 1) > n);
  }
  CHECK(isqrt(~u64{0}) == 4294967295u);
  CHECK(isqrt((u64{1} << 62)) == (u64{1} << 31));
  CHECK(is_square(0));
  CHECK(is_square(1));
  CHECK(is_square(144));
  CHECK_FALSE(is_square(145));
  CHECK_FALSE(is_square(-4));
}

TEST_CASE("primality") {
  for (u64 n = 0; n < 100000; ++n) REQUIRE(is_prime(n) == oracle::is_prime(n));
  CHECK(is_prime(1000000007));
  CHECK(is_prime((u64{1} << 61) - 1));
  CHECK_FALSE(is_prime(3215031751u));  // strong pseudoprime to 2, 3, 5, 7
  CHECK_FALSE(is_prime(u64{1000000007} * 1000000009u));
  CHECK(is_prime(18446744073709551557u));
}

TEST_CASE("factorize, phi, mobius, squarefree") {
  CHECK(factorize(1).empty());
  CHECK(factorize(360) == std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(mobius(1) == 1);
  CHECK(mobius(6) == 1);
  CHECK(mobius(12) == 0);
  for (u64 n = 1; n <= 2000; ++n) {
    u64 prod = 1;
    for (const auto& f : factorize(n)) {
      REQUIRE(oracle::is_prime(f.prime));
      for (unsigned i = 0; i < f.exponent; ++i) prod *= f.prime;
    }
    REQUIRE(prod == n);
    REQUIRE(euler_phi(n) == oracle::phi(n));
    REQUIRE(mobius(n) == oracle::mobius(n));
    REQUIRE(is_squarefree(n) == (oracle::mobius(n) != 0));
  }
}

TEST_CASE("mobius multiplicative on coprime pairs") {
  for (u64 m = 1; m <= 100; ++m)
    for (u64 n = 1; m * n <= 10000; ++n)
      if (std::gcd(m, n) == 1) REQUIRE(mobius(m * n) == mobius(m) * mobius(n));
}

TEST_CASE("square_part") {
  CHECK(square_part(1) == SquarePartDecomposition{1, 1, 1, 1, 1});
  CHECK(square_part(8) == SquarePartDecomposition{8, 2, 2, 2, 2});
  CHECK(square_part(12) == SquarePartDecomposition{12, 3, 2, 3, 2});
  const SmallestFactorTable table(1000000);
  for (u64 a = 1; a <= 1000000; ++a) {
    const auto s = table.square_part(a);
    REQUIRE(s.l_sf * s.sq * s.sq == a);
    REQUIRE(s.core_l * s.core_l * s.core_m == a);
    REQUIRE(table.mobius(s.l_sf) != 0);
    REQUIRE(table.mobius(s.core_m) != 0);
  }
  for (u64 a = 1; a <= 20000; ++a) {
    REQUIRE(table.factorize(a) == factorize(a));
    REQUIRE(table.square_part(a) == square_part(a));
    REQUIRE(table.mobius(a) == mobius(a));
  }
}

TEST_CASE("epsilon_d") {
  CHECK(epsilon_d(2, 2) == 1);
  CHECK(epsilon_d(5, 10) == 2);
  CHECK(epsilon_d(5, 2) == 1);
  CHECK(epsilon_d(-3, 6) == 2);   // l = -3 = 1 mod 4, 2l | 6
  CHECK(epsilon_d(20, 10) == 2);  // 20 = 5 * 2^2
  CHECK(epsilon_d(3, 6) == 1);
  CHECK_THROWS_AS(epsilon_d(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_d(9, 2), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_d(2, 12), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_d(2, 0), std::invalid_argument);
}

TEST_CASE("primitive roots and discrete logs") {
  CHECK(primitive_root(3) == 2);
  CHECK(primitive_root(7) == 3);
  CHECK(primitive_root(41) == 6);
  CHECK(discrete_log(7, 3, 1) == 0);
  CHECK(discrete_log(7, 3, 6) == 3);
  CHECK_THROWS_AS(primitive_root(15), std::invalid_argument);

  for (u64 p : oracle::primes_upto(1000)) {
    if (p == 2) continue;
    const u64 g = primitive_root(p);
    REQUIRE(oracle::order(g, p) == p - 1);
    for (u64 c = 2; c < g; ++c) REQUIRE(oracle::order(c, p) < p - 1);
    const DiscreteLog log(p, g);
    REQUIRE(log(static_cast<i64>(g)) == 1);
    for (u64 k = 0; k < p - 1; ++k) REQUIRE(log(static_cast<i64>(powmod(static_cast<i64>(g), k, p))) == k);
    CHECK_THROWS_AS(log(static_cast<i64>(p)), std::invalid_argument);
  }
}

TEST_CASE("baby-step giant-step above the table limit") {
  u64 p = DiscreteLog::kTableLimit + 1;
  while (!is_prime(p)) ++p;
  const u64 g = primitive_root(p);
  const DiscreteLog log(p, g);
  CHECK_FALSE(log.uses_table());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const u64 k = rng() % (p - 1);
    REQUIRE(log(static_cast<i64>(powmod(static_cast<i64>(g), k, p))) == k);
  }
  const u64 big = 1000000007;
  const DiscreteLog big_log(big, primitive_root(big));
  const u64 k = 123456789;
  CHECK(big_log(static_cast<i64>(powmod(static_cast<i64>(big_log.root()), k, big))) == k);
}

TEST_CASE("li") {
  CHECK(li(2) == doctest::Approx(1.045163780117492).epsilon(1e-12));
  CHECK(li(100) == doctest::Approx(30.12614158407963).epsilon(1e-12));
  CHECK_THROWS_AS(li(1.0), std::domain_error);
  double prev = li(2.0);
  for (double x = 2.5; x < 1e12; x *= 1.7) {
    const double v = li(x);
    REQUIRE(v > prev);
    REQUIRE(std::abs(v - li_quadrature(x)) <= 1e-10 * std::abs(v));
    prev = v;
  }
  // near the singular point the two routes still agree
  for (double x : {1.01, 1.2, 1.45136923488338}) CHECK(std::abs(li(x) - li_quadrature(x)) <= 1e-9);
}

TEST_CASE("mertens_sum") {
  CHECK(mertens_sum(1.5) == 0.0);
  CHECK(mertens_sum(2) == 0.5);
  double s = 0;
  for (u64 p : oracle::primes_upto(100)) s += 1.0 / static_cast<double>(p);
  CHECK(mertens_sum(100) == doctest::Approx(s).epsilon(1e-15));
  CHECK(mertens_sum(100) == doctest::Approx(1.8028).epsilon(1e-4));
  CHECK(std::abs(mertens_sum(1e6) - (std::log(std::log(1e6)) + kMertensConstant)) < 0.01);
}
