#include "ntlab/arith.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ntlab/primes.hpp"
#include "ntlab/quadrature.hpp"

namespace ntlab::arith {

u64 powmod(i64 a, u64 e, u64 n) {
  if (n == 1) return 0;
  u64 base = reduce(a, n);
  u64 result = 1;
  while (e > 0) {
    if (e & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    e >>= 1;
  }
  return result;
}

namespace {

// (a/n) for odd n >= 1 and 0 <= a < n.
int jacobi_reduced(u64 a, u64 n) {
  int t = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const u64 r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

}  // namespace

int jacobi(i64 a, i64 n) {
  if (n < 1 || (n & 1) == 0)
    throw std::invalid_argument("jacobi: modulus must be odd and positive, got " +
                                std::to_string(n));
  const u64 un = static_cast<u64>(n);
  return jacobi_reduced(reduce(a, un), un);
}

int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int t = 1;
  u64 m;
  if (n < 0) {
    if (a < 0) t = -t;
    m = static_cast<u64>(-(n + 1)) + 1;
  } else {
    m = static_cast<u64>(n);
  }
  while ((m & 1) == 0) {
    if ((a & 1) == 0) return 0;
    const u64 r = reduce(a, 8);
    if (r == 3 || r == 5) t = -t;
    m >>= 1;
  }
  return t * jacobi_reduced(reduce(a, m), m);
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

bool is_square(i64 a) {
  if (a < 0) return false;
  const u64 r = isqrt(static_cast<u64>(a));
  return r * r == static_cast<u64>(a);
}

std::vector<PrimePower> factorize(u64 n) {
  std::vector<PrimePower> out;
  if (n < 2) return out;
  auto take = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  take(2);
  take(3);
  for (u64 p = 5; p <= n / p; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = powmod(static_cast<i64>(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 euler_phi(u64 n) {
  if (n == 0) return 0;
  u64 result = n;
  for (const auto& f : factorize(n)) result = result / f.prime * (f.prime - 1);
  return result;
}

int mobius(u64 a) {
  if (a == 0) throw std::invalid_argument("mobius: argument must be positive");
  int mu = 1;
  for (const auto& f : factorize(a)) {
    if (f.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

bool is_squarefree(u64 a) { return a != 0 && mobius(a) != 0; }

namespace {

SquarePartDecomposition assemble(u64 a, const std::vector<PrimePower>& factors) {
  SquarePartDecomposition out;
  out.a = a;
  for (const auto& f : factors) {
    u64 half = 1;
    for (unsigned i = 0; i < f.exponent / 2; ++i) half *= f.prime;
    if (f.exponent % 2 == 1) {
      out.l_sf *= f.prime;
      out.core_m *= f.prime;
    }
    out.sq *= half;
    out.core_l *= half;
  }
  return out;
}

}  // namespace

// For a single integer both decompositions coincide numerically
// (l_sf = core_m, sq = core_l); they are kept as separate fields because
// callers use them in the two different orientations.
SquarePartDecomposition square_part(u64 a) {
  if (a == 0) throw std::invalid_argument("square_part: argument must be positive");
  return assemble(a, factorize(a));
}

SmallestFactorTable::SmallestFactorTable(u64 limit) : limit_(limit), spf_(limit + 1, 0) {
  if (limit > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("SmallestFactorTable: limit too large");
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i > limit / i) continue;
    for (u64 j = i * i; j <= limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
  }
}

std::vector<PrimePower> SmallestFactorTable::factorize(u64 n) const {
  if (n > limit_) return arith::factorize(n);
  std::vector<PrimePower> out;
  while (n > 1) {
    const u64 p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

SquarePartDecomposition SmallestFactorTable::square_part(u64 a) const {
  if (a == 0) throw std::invalid_argument("square_part: argument must be positive");
  return assemble(a, factorize(a));
}

int SmallestFactorTable::mobius(u64 a) const {
  if (a == 0) throw std::invalid_argument("mobius: argument must be positive");
  int mu = 1;
  while (a > 1) {
    const u64 p = a <= limit_ ? spf_[a] : factorize(a).front().prime;
    a /= p;
    if (a % p == 0) return 0;
    mu = -mu;
  }
  return mu;
}

int epsilon_d(i64 a, u64 d) {
  if (a == -1) throw std::invalid_argument("epsilon_d: a = -1 is excluded");
  if (is_square(a)) throw std::invalid_argument("epsilon_d: a must not be a square");
  if (d == 0 || !is_squarefree(d))
    throw std::invalid_argument("epsilon_d: d must be a positive squarefree integer");
  const u64 magnitude = a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a);
  const u64 l_abs = square_part(magnitude).l_sf;
  const i64 l = a < 0 ? -static_cast<i64>(l_abs) : static_cast<i64>(l_abs);
  const bool one_mod_four = reduce(l, 4) == 1;
  const bool divides = d % (2 * l_abs) == 0;
  return (one_mod_four && divides) ? 2 : 1;
}

u64 primitive_root(u64 p) {
  if (!is_prime(p))
    throw std::invalid_argument("primitive_root: " + std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  const auto factors = factorize(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool generator = true;
    for (const auto& f : factors) {
      if (powmod(static_cast<i64>(g), (p - 1) / f.prime, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("primitive_root: no generator found");
}

DiscreteLog::DiscreteLog(u64 p, u64 g) : p_(p), g_(g % p) {
  if (p < 2) throw std::invalid_argument("DiscreteLog: modulus must be prime");
  if (p <= kTableLimit) {
    table_.assign(p, 0);
    u64 x = 1;
    for (u64 k = 0; k + 1 < p; ++k) {
      table_[x] = static_cast<std::uint32_t>(k);
      x = mulmod(x, g_, p);
    }
    return;
  }
  const u64 m = isqrt(p - 1) + 1;
  giant_step_count_ = m;
  baby_steps_.reserve(m * 2);
  u64 x = 1;
  for (u64 j = 0; j < m; ++j) {
    baby_steps_.emplace(x, j);
    x = mulmod(x, g_, p);
  }
  // g^{-m} = g^{(p-1) - m}
  giant_factor_ = powmod(static_cast<i64>(g_), (p - 1) - (m % (p - 1)), p);
}

u64 DiscreteLog::operator()(i64 a) const {
  const u64 r = reduce(a, p_);
  if (r == 0) throw std::invalid_argument("discrete_log: argument divisible by modulus");
  if (!table_.empty()) return table_[r];
  u64 gamma = r;
  for (u64 i = 0; i <= giant_step_count_; ++i) {
    if (auto it = baby_steps_.find(gamma); it != baby_steps_.end())
      return (i * giant_step_count_ + it->second) % (p_ - 1);
    gamma = mulmod(gamma, giant_factor_, p_);
  }
  throw std::invalid_argument("discrete_log: generator does not generate the group");
}

u64 discrete_log(u64 p, u64 g, i64 a) {
  if (reduce(a, p) == 0)
    throw std::invalid_argument("discrete_log: argument divisible by modulus");
  return DiscreteLog(p, g)(a);
}

double li(double x) {
  if (!(x > 1.0)) throw std::domain_error("li: requires x > 1");
  const double lx = std::log(x);
  // sqrt(x) * sum_{n>=1} (-1)^{n-1} lx^n / (n! 2^{n-1}) * sum_{k<=(n-1)/2} 1/(2k+1)
  long double sum = 0.0L;
  long double term = 1.0L;  // lx^n / (n! 2^{n-1}) built incrementally
  long double inner = 0.0L;
  for (int n = 1; n < 1000; ++n) {
    term = (n == 1) ? lx : term * lx / (2.0L * n);
    if ((n - 1) % 2 == 0) inner += 1.0L / (n);  // adds 1/(2k+1) with 2k+1 = n
    const long double contrib = ((n % 2 == 1) ? 1.0L : -1.0L) * term * inner;
    sum += contrib;
    if (n > 2 * lx && std::abs(contrib) < 1e-20L * std::abs(sum)) break;
  }
  return static_cast<double>(kEulerGamma + std::log(lx) + std::sqrt(static_cast<long double>(x)) * sum);
}

double li_quadrature(double x) {
  if (!(x > 1.0)) throw std::domain_error("li_quadrature: requires x > 1");
  const double lx = std::log(x);
  auto integrand = [](double u) { return u == 0.0 ? 1.0 : std::expm1(u) / u; };
  const double scale = std::max(1.0, x / lx);
  const double body = quad::adaptive_simpson(integrand, 0.0, lx, 1e-14 * scale, 64);
  return kEulerGamma + std::log(lx) + body;
}

double mertens_sum(double x) {
  if (x < 2.0) return 0.0;
  long double sum = 0.0L;
  primes::PrimeRange range{2, static_cast<u64>(std::floor(x)) + 1};
  primes::stream_primes(range, [&](u64 p) { sum += 1.0L / static_cast<long double>(p); });
  return static_cast<double>(sum);
}

}  // namespace ntlab::arith
