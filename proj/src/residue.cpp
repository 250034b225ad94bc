#include "ntlab/residue.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntlab/characters.hpp"
#include "ntlab/primes.hpp"

namespace ntlab::residue {

using characters::CycloInt;

bool is_dth_power_residue(i64 a, u64 p, u64 d) {
  if (d == 0 || p < 2 || (p - 1) % d != 0)
    throw std::invalid_argument("is_dth_power_residue: need p = 1 (mod d)");
  if (arith::reduce(a, p) == 0)
    throw std::invalid_argument("is_dth_power_residue: p divides a");
  return arith::powmod(a, (p - 1) / d, p) == 1;
}

u64 count_P(i64 a, u64 d, double x) {
  if (d == 0) throw std::invalid_argument("count_P: d must be positive");
  if (x < 2.0) return 0;
  const u64 limit = static_cast<u64>(std::floor(x));
  u64 count = 0;
  primes::PrimeRange range{2, limit + 1, primes::ResidueFilter{d, 1 % d}};
  primes::stream_primes(range, [&](u64 p) {
    if (arith::reduce(a, p) == 0) return;
    if (arith::powmod(a, (p - 1) / d, p) == 1) ++count;
  });
  return count;
}

std::string_view to_string(AMode m) { return m == AMode::all ? "all" : "nonsquare"; }

std::string_view to_string(EvalMode m) {
  switch (m) {
    case EvalMode::automatic:
      return "automatic";
    case EvalMode::character:
      return "character";
    default:
      return "direct";
  }
}

namespace {

struct Partial {
  u64 primes = 0;
  i64 principal = 0;
  CycloInt character{};
  i64 direct = 0;
};

Partial combine(Partial a, const Partial& b) {
  a.primes += b.primes;
  a.principal += b.principal;
  a.character += b.character;
  a.direct += b.direct;
  return a;
}

// #{2 <= a <= Y : p does not divide a}, optionally without the squares.
i64 principal_count(u64 p, u64 Y, AMode mode) {
  i64 n = static_cast<i64>(Y - 1 - Y / p);
  if (mode == AMode::nonsquare) {
    const u64 root = arith::isqrt(Y);
    if (root >= 2) n -= static_cast<i64>((root - 1) - root / p);
  }
  return n;
}

Partial character_pass(const primes::PrimeRange& range, unsigned d, u64 Y, AMode mode,
                       const arith::SmallestFactorTable& spf) {
  Partial part;
  part.character = CycloInt::integer(0, characters::ring_for_order(d));
  std::vector<std::uint8_t> cls;
  const u64 root = arith::isqrt(Y);
  primes::stream_primes(range, [&](u64 p) {
    ++part.primes;
    part.principal += principal_count(p, Y, mode);
    // full periods of a non-principal character sum to zero
    const u64 r = Y % p;
    const bool need_squares = mode == AMode::nonsquare && root >= 2;
    const u64 n = (Y >= p && need_squares) ? p - 1 : std::min<u64>(r, p - 1);
    const u64 g = d == 2 ? 0 : arith::primitive_root(p);
    characters::exponent_classes(p, d, g, n, spf, cls);
    std::int64_t count[6] = {};
    for (u64 a = 1; a <= r; ++a) ++count[cls[a]];
    --count[0];  // a = 1 is not averaged over
    if (need_squares) {
      for (u64 b = 2; b <= root; ++b) {
        if (b % p == 0) continue;
        const u64 sq = (b * b) % p;
        --count[cls[sq]];
      }
    }
    for (unsigned j = 1; j < d; ++j)
      for (unsigned e = 0; e < d; ++e)
        if (count[e] != 0)
          part.character += count[e] * CycloInt::root_of_unity(d, static_cast<u64>(j) * e);
  });
  return part;
}

Partial direct_pass(const primes::PrimeRange& range, u64 d, u64 Y, AMode mode) {
  Partial part;
  primes::stream_primes(range, [&](u64 p) {
    ++part.primes;
    part.principal += principal_count(p, Y, mode);
    const u64 e = (p - 1) / d;
    for (u64 a = 2; a <= Y; ++a) {
      if (a % p == 0) continue;
      if (mode == AMode::nonsquare && arith::is_square(static_cast<i64>(a))) continue;
      if (arith::powmod(static_cast<i64>(a), e, p) == 1) ++part.direct;
    }
  });
  return part;
}

}  // namespace

MeanValueResult mean_value(u64 d, double x, double y, const MeanValueOptions& options) {
  if (!(y >= 2.0)) throw std::invalid_argument("mean_value: need y >= 2");
  if (!(x >= 3.0)) throw std::invalid_argument("mean_value: need x >= 3");
  if (d == 0) throw std::invalid_argument("mean_value: d must be positive");
  const bool supported = d == 2 || d == 3 || d == 4 || d == 6;
  EvalMode mode = options.mode;
  if (mode == EvalMode::character && !supported)
    throw std::invalid_argument("mean_value: character mode needs d in {2,3,4,6}, got " +
                                std::to_string(d));
  if (mode == EvalMode::automatic) mode = supported ? EvalMode::character : EvalMode::direct;

  const u64 X = static_cast<u64>(std::floor(x));
  const u64 Y = static_cast<u64>(std::floor(y));
  primes::PrimeRange range{2, X + 1, primes::ResidueFilter{d, 1 % d}};

  Partial total;
  if (mode == EvalMode::character) {
    const arith::SmallestFactorTable spf(std::min(Y, X));
    total = primes::shard_reduce(
        range, options.threads, Partial{0, 0, CycloInt::integer(0, characters::ring_for_order(d)), 0},
        [&](const primes::PrimeRange& sub) {
          return character_pass(sub, static_cast<unsigned>(d), Y, options.a_mode, spf);
        },
        combine);
  } else {
    total = primes::shard_reduce(
        range, options.threads, Partial{},
        [&](const primes::PrimeRange& sub) { return direct_pass(sub, d, Y, options.a_mode); },
        combine);
  }

  MeanValueResult r;
  r.d = d;
  r.x = x;
  r.y = y;
  r.a_mode = options.a_mode;
  r.mode = mode;
  r.primes_used = total.primes;
  r.principal_count = total.principal;
  const i64 di = static_cast<i64>(d);
  if (mode == EvalMode::character) {
    if (!total.character.is_integer())
      throw std::logic_error("mean_value: character sum has a non-real part");
    r.character_count = total.character.re;
    const i64 numerator = r.principal_count + r.character_count;
    if (numerator % di != 0)
      throw std::logic_error("mean_value: principal + character count not divisible by d");
    r.direct_count = numerator / di;
  } else {
    r.direct_count = total.direct;
    r.character_count = di * r.direct_count - r.principal_count;
  }
  const double scale = static_cast<double>(d) * y;
  r.S1 = static_cast<double>(r.principal_count) / scale;
  r.S2 = static_cast<double>(r.character_count) / scale;
  r.S = static_cast<double>(r.direct_count) / y;
  if (d == 2) r.main_term = static_cast<double>(primes::pi(X)) / 2.0;
  else r.main_term = static_cast<double>(r.primes_used) / static_cast<double>(d);
  r.abs_error = std::abs(r.S - r.main_term);
  return r;
}

double hooley_main_term(i64 a, u64 d, double x) {
  const int eps = arith::epsilon_d(a, d);
  return eps / (static_cast<double>(d) * static_cast<double>(arith::euler_phi(d))) * arith::li(x);
}

}  // namespace ntlab::residue
