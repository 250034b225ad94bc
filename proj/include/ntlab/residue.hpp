#pragma once

// P_{(a,d)}(x): primes p <= x with p = 1 (mod d), p not dividing a, and
// a^{(p-1)/d} = 1 (mod p); its average over 2 <= a <= y and the Hooley
// main term.

#include <cstdint>
#include <string_view>

#include "ntlab/arith.hpp"

namespace ntlab::residue {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Euler-criterion test a^{(p-1)/d} = 1 (mod p). Throws when p does not
/// satisfy p = 1 (mod d) or when p | a.
bool is_dth_power_residue(i64 a, u64 p, u64 d);

/// P_{(a,d)}(x). Square a are accepted here.
u64 count_P(i64 a, u64 d, double x);

enum class AMode { all, nonsquare };
/// Character: one pass over primes with exact character sums.
/// Direct: sum over a of the Euler criterion, no characters involved.
/// Automatic: character mode for d in {2,3,4,6}, direct otherwise.
enum class EvalMode { automatic, character, direct };

std::string_view to_string(AMode m);
std::string_view to_string(EvalMode m);

struct MeanValueOptions {
  AMode a_mode = AMode::all;
  EvalMode mode = EvalMode::automatic;
  unsigned threads = 1;
};

/// S = (1/y) sum_{2 <= a <= y} P_{(a,d)}(x) and its split S = S1 + S2,
///   S1 = (1/(d y)) sum_p #{2 <= a <= y : p does not divide a}
///   S2 = (1/(d y)) sum_p sum_a sum_{chi^d = chi_0, chi != chi_0} chi(a)
/// over primes p <= x with p = 1 (mod d). The integer numerators are
/// exact, and principal_count + character_count == d * direct_count.
struct MeanValueResult {
  u64 d = 0;
  double x = 0.0;
  double y = 0.0;
  AMode a_mode = AMode::all;
  EvalMode mode = EvalMode::direct;

  double S = 0.0;
  double S1 = 0.0;
  double S2 = 0.0;
  double main_term = 0.0;  // pi(x)/2 for d = 2, pi(x;1,d)/d otherwise
  double abs_error = 0.0;  // |S - main_term|

  u64 primes_used = 0;       // primes p <= x with p = 1 (mod d)
  i64 principal_count = 0;   // numerator of S1
  i64 character_count = 0;   // numerator of S2 (d * direct - principal in direct mode)
  i64 direct_count = 0;      // sum_a P_{(a,d)}(x)
};

/// Throws std::invalid_argument for y < 2, x < 3, or d outside
/// {2,3,4,6} in explicit character mode.
MeanValueResult mean_value(u64 d, double x, double y, const MeanValueOptions& options = {});

/// epsilon(d) / (d phi(d)) * li(x).
double hooley_main_term(i64 a, u64 d, double x);

}  // namespace ntlab::residue
