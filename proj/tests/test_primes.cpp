#include "doctest.h"

#include <random>

#include "ntlab/primes.hpp"
#include "oracles.hpp"

using namespace ntlab::primes;

namespace {

std::vector<u64> collect(const PrimeRange& r) {
  std::vector<u64> out;
  stream_primes(r, [&](u64 p) { out.push_back(p); });
  return out;
}

}  // namespace

TEST_CASE("stream_primes examples") {
  CHECK(collect({2, 3}) == std::vector<u64>{2});
  CHECK(stream_primes(PrimeRange{2, 101}, [](u64) {}) == 25);
  const auto ones = collect({2, 101, ResidueFilter{3, 1}});
  CHECK(ones == std::vector<u64>{7, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97});
  CHECK(collect({0, 2}).empty());
  CHECK(collect({5, 5}).empty());
  CHECK_THROWS_AS(SegmentedSieve(PrimeRange{10, 5}), std::invalid_argument);
  CHECK_THROWS_AS(SegmentedSieve(PrimeRange{2, 100, std::nullopt, 1024}), std::invalid_argument);
  CHECK_THROWS_AS(SegmentedSieve(PrimeRange{2, 100, ResidueFilter{0, 0}}), std::invalid_argument);
}

TEST_CASE("pi and pi_class") {
  CHECK(pi(10) == 4);
  CHECK(pi(1) == 0);
  CHECK(pi(2) == 1);
  CHECK(pi(10000) == 1229);
  CHECK(pi(1000000) == 78498);
  CHECK(pi_class(100, 4) == 11);
  for (u64 x : {2u, 97u, 1000u, 54321u}) CHECK(pi_class(x, 1) == pi(x));
}

TEST_CASE("segmented count equals trial division up to 10^5") {
  const auto ref = oracle::primes_upto(100000);
  PrimeRange r{0, 100001};
  r.segment_bytes = PrimeRange::kMinSegmentBytes;  // many segments
  const auto got = collect(r);
  CHECK(got == ref);
  // every prefix count
  std::size_t k = 0;
  for (u64 x = 0; x <= 100000; x += 997) {
    while (k < ref.size() && ref[k] <= x) ++k;
    REQUIRE(pi(x) == k);
  }
}

TEST_CASE("emission is ascending, in range, and filtered") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const u64 lo = rng() % 3000000;
    const u64 hi = lo + rng() % 200000;
    const u64 m = 1 + rng() % 12;
    const u64 res = rng() % m;
    u64 prev = 0;
    bool first = true;
    stream_primes(PrimeRange{lo, hi, ResidueFilter{m, res}}, [&](u64 p) {
      REQUIRE(p >= lo);
      REQUIRE(p < hi);
      REQUIRE(p % m == res);
      REQUIRE(oracle::is_prime(p));
      if (!first) REQUIRE(p > prev);
      prev = p;
      first = false;
    });
  }
}

TEST_CASE("partition and shard independence") {
  const u64 a = 1000, c = 2000000;
  for (u64 b : {a, u64{1001}, u64{65536}, u64{999999}, c}) {
    CHECK(count_primes({a, b}) + count_primes({b, c}) == count_primes({a, c}));
  }
  const PrimeRange r{3, 3000000, ResidueFilter{4, 1}};
  const u64 one = count_primes(r, 1);
  for (unsigned shards : {2u, 3u, 7u, 64u}) CHECK(count_primes(r, shards) == one);
  const u64 sum = shard_reduce(
      r, 5, u64{0},
      [](const PrimeRange& sub) {
        u64 s = 0;
        stream_primes(sub, [&](u64 p) { s += p; });
        return s;
      },
      [](u64 x, u64 y) { return x + y; });
  u64 ref = 0;
  stream_primes(r, [&](u64 p) { ref += p; });
  CHECK(sum == ref);
}

TEST_CASE("large window far from the origin") {
  const u64 lo = u64{1} << 34;
  const auto got = collect({lo, lo + 2000});
  for (u64 p : got) REQUIRE(oracle::is_prime(p));
  u64 k = 0;
  for (u64 n = lo; n < lo + 2000; ++n)
    if (oracle::is_prime(n)) ++k;
  CHECK(got.size() == k);
}

TEST_CASE("primes_below") {
  CHECK(primes_below(0).empty());
  CHECK(primes_below(2).empty());
  CHECK(primes_below(3) == std::vector<u64>{2});
  CHECK(primes_below(30) == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}
