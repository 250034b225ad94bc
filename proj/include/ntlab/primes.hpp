#pragma once

// Segmented odd-only sieve of Eratosthenes with a push (visitor)
// interface. Memory is bounded by the segment size plus the base primes
// up to sqrt(hi); nothing proportional to hi is ever materialized.

#include <cstdint>
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ntlab::primes {

using u64 = std::uint64_t;

/// Keep only p = residue (mod modulus).
struct ResidueFilter {
  u64 modulus = 1;
  u64 residue = 0;
};

struct PrimeRange {
  u64 lo = 2;
  u64 hi = 2;  // exclusive
  std::optional<ResidueFilter> filter{};
  u64 segment_bytes = u64{1} << 18;

  static constexpr u64 kMaxHi = u64{1} << 63;
  static constexpr u64 kMinSegmentBytes = u64{1} << 14;
};

/// Pulls primes of a PrimeRange one segment at a time.
class SegmentedSieve {
 public:
  /// Throws std::invalid_argument when hi < lo, hi > 2^63, the segment is
  /// smaller than 16 KiB, or the filter modulus is zero.
  explicit SegmentedSieve(const PrimeRange& range);

  /// Replaces `out` with the qualifying primes of the next segment, in
  /// ascending order. Returns false once the range is exhausted.
  bool next(std::vector<u64>& out);

 private:
  PrimeRange range_;
  std::vector<std::uint32_t> base_;
  std::vector<std::uint8_t> composite_;
  u64 cursor_;  // next odd number to sieve
  bool emitted_two_ = false;
  bool done_ = false;

  bool keep(u64 p) const {
    return !range_.filter || p % range_.filter->modulus == range_.filter->residue;
  }
};

/// Visits every qualifying prime of `range` exactly once in ascending
/// order and returns how many were visited.
template <class Visitor>
u64 stream_primes(const PrimeRange& range, Visitor&& visit) {
  SegmentedSieve sieve(range);
  std::vector<u64> segment;
  u64 count = 0;
  while (sieve.next(segment)) {
    for (u64 p : segment) visit(p);
    count += segment.size();
  }
  return count;
}

/// Splits [lo, hi) into `shards` contiguous sub-ranges, evaluates
/// `partial(sub_range)` on each in its own thread and folds the results
/// in shard order with `combine`. With an associative `combine` the
/// result is independent of the shard count.
template <class T, class Partial, class Combine>
T shard_reduce(const PrimeRange& range, unsigned shards, T init, Partial partial,
               Combine combine) {
  if (range.hi < range.lo) throw std::invalid_argument("PrimeRange: hi < lo");
  shards = std::max(1u, shards);
  const u64 span = range.hi - range.lo;
  if (span < shards) shards = 1;
  std::vector<PrimeRange> parts;
  for (unsigned s = 0; s < shards; ++s) {
    PrimeRange sub = range;
    sub.lo = range.lo + span / shards * s;
    sub.hi = (s + 1 == shards) ? range.hi : range.lo + span / shards * (s + 1);
    parts.push_back(sub);
  }
  std::vector<std::optional<T>> results(shards);
  if (shards == 1) {
    results[0].emplace(partial(parts[0]));
  } else {
    std::vector<std::jthread> workers;
    for (unsigned s = 0; s < shards; ++s)
      workers.emplace_back([&, s] { results[s].emplace(partial(parts[s])); });
  }
  T acc = std::move(init);
  for (auto& r : results) acc = combine(std::move(acc), std::move(*r));
  return acc;
}

/// Number of primes p <= x.
u64 pi(u64 x);
/// Number of primes p <= x with p = 1 (mod d); pi_class(x, 1) == pi(x).
u64 pi_class(u64 x, u64 d);

u64 count_primes(const PrimeRange& range, unsigned shards = 1);

/// All primes below `limit` (convenience for small tables and tests).
std::vector<u64> primes_below(u64 limit);

}  // namespace ntlab::primes
