#include "ntlab/primes.hpp"

#include <algorithm>
#include <stdexcept>

#include "ntlab/arith.hpp"

namespace ntlab::primes {

SegmentedSieve::SegmentedSieve(const PrimeRange& range) : range_(range) {
  if (range.hi < range.lo) throw std::invalid_argument("PrimeRange: hi < lo");
  if (range.hi > PrimeRange::kMaxHi) throw std::invalid_argument("PrimeRange: hi > 2^63");
  if (range.segment_bytes < PrimeRange::kMinSegmentBytes)
    throw std::invalid_argument("PrimeRange: segment smaller than 16 KiB");
  if (range.filter && range.filter->modulus == 0)
    throw std::invalid_argument("PrimeRange: filter modulus must be positive");
  if (range.filter) range_.filter->residue %= range.filter->modulus;

  const u64 lo = std::max<u64>(range.lo, 3);
  cursor_ = lo | 1;
  emitted_two_ = !(range.lo <= 2 && 2 < range.hi);
  done_ = range.hi <= cursor_ && emitted_two_;

  if (range.hi > 9) {
    const u64 root = arith::isqrt(range.hi - 1);
    std::vector<std::uint8_t> small(root + 1, 0);
    for (u64 i = 3; i <= root; i += 2) {
      if (small[i]) continue;
      base_.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j <= root; j += 2 * i) small[j] = 1;
    }
  }
  composite_.resize(range_.segment_bytes);
}

bool SegmentedSieve::next(std::vector<u64>& out) {
  out.clear();
  if (done_) return false;
  if (!emitted_two_) {
    emitted_two_ = true;
    if (keep(2)) out.push_back(2);
  }
  if (cursor_ >= range_.hi) {
    done_ = true;
    return !out.empty();
  }
  // segment holds the odd numbers cursor_, cursor_ + 2, ..., < seg_hi
  const u64 slots = std::min<u64>(composite_.size(), (range_.hi - cursor_ + 1) / 2);
  const u64 seg_hi = cursor_ + 2 * slots;
  std::fill(composite_.begin(), composite_.begin() + static_cast<std::ptrdiff_t>(slots), 0);
  for (u64 q : base_) {
    const u64 sq = q * q;
    if (sq >= seg_hi) break;
    u64 start;
    if (sq >= cursor_) {
      start = sq;
    } else {
      start = (cursor_ + q - 1) / q * q;
      if ((start & 1) == 0) start += q;
    }
    for (u64 m = (start - cursor_) / 2; m < slots; m += q) composite_[m] = 1;
  }
  for (u64 i = 0; i < slots; ++i) {
    const u64 n = cursor_ + 2 * i;
    if (!composite_[i] && n > 1 && keep(n)) out.push_back(n);
  }
  cursor_ = seg_hi;
  if (cursor_ >= range_.hi) done_ = true;
  return true;
}

u64 pi(u64 x) {
  if (x < 2) return 0;
  return stream_primes(PrimeRange{2, x + 1}, [](u64) {});
}

u64 pi_class(u64 x, u64 d) {
  if (x < 2) return 0;
  if (d == 0) throw std::invalid_argument("pi_class: d must be positive");
  PrimeRange range{2, x + 1, ResidueFilter{d, 1 % d}};
  return stream_primes(range, [](u64) {});
}

u64 count_primes(const PrimeRange& range, unsigned shards) {
  return shard_reduce(
      range, shards, u64{0},
      [](const PrimeRange& sub) { return stream_primes(sub, [](u64) {}); },
      [](u64 a, u64 b) { return a + b; });
}

std::vector<u64> primes_below(u64 limit) {
  std::vector<u64> out;
  if (limit <= 2) return out;
  stream_primes(PrimeRange{2, limit}, [&](u64 p) { out.push_back(p); });
  return out;
}

}  // namespace ntlab::primes
