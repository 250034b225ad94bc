#pragma once

// Error envelopes of the averaged prime counts, experiment records with
// their JSON-lines persistence and CSV summaries, INI sweep configs, and
// the sweep runner used by the ntlab CLI.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>
#include "json.hpp"

namespace ntlab::lab {

using u64 = std::uint64_t;
using Rational = boost::rational<std::int64_t>;
using json = nlohmann::json;

std::string_view code_version();

// ---------------------------------------------------------------------
// Envelopes

enum class Theorem { resd2, cubquarsex, libound };

std::string_view to_string(Theorem t);
/// Accepts "resd2", "cubquarsex", "libound" (case-insensitive).
Theorem parse_theorem(std::string_view name);

/// x^{x_exponent} y^{y_exponent} (log x)^{log_exponent} on the range of
/// beta = log x / log y ending at `upper` (unbounded when empty).
struct EnvelopePiece {
  std::optional<Rational> upper;
  bool upper_closed = true;
  Rational x_exponent;
  Rational y_exponent;
  Rational log_exponent;
};

struct ErrorEnvelope {
  Theorem theorem;
  std::vector<EnvelopePiece> pieces;  // ordered by beta
};

/// resd2 switches on x / log x >= y rather than on beta, so its two pieces
/// carry no breakpoint. libound includes the x / log x scale but not the
/// 1/phi(d) factor.
const ErrorEnvelope& envelope(Theorem t);

/// Index of the piece in force at (x, y). Breakpoints go to the left piece
/// unless the piece is open on the right.
std::size_t select_piece(const ErrorEnvelope& env, double x, double y);

/// Exponent of y in piece evaluated on x = y^beta (log factors ignored).
Rational exponent_on_curve(const EnvelopePiece& piece, Rational beta);

/// Breakpoints where adjacent pieces disagree, by exact rational
/// arithmetic. Empty for cubquarsex.
std::vector<Rational> continuity_defects(const ErrorEnvelope& env);

struct EnvelopeValue {
  double plain = 0.0;     // without (xy)^eps
  double with_eps = 0.0;  // plain * (xy)^eps
  std::size_t piece = 0;
};

/// Requires x, y > 1. `d` only enters libound, through 1/phi(d).
EnvelopeValue envelope_eval(Theorem t, double x, double y, double eps = 0.01, u64 d = 2);

struct DominancePoint {
  double x = 0.0;
  double y = 0.0;
  double ratio = 0.0;  // new * (xy)^eps / (libound * phi(d) * log x)
};

struct DominanceReport {
  Theorem theorem = Theorem::cubquarsex;
  std::size_t points = 0;
  DominancePoint worst;
};

/// Log-grid 10^2 <= y <= 10^8, 10^2 <= x <= 10^16 in steps of 1/`per_decade`
/// decades. The new envelope dominates where worst.ratio <= 1.
DominanceReport dominance_check(Theorem theorem, double eps = 0.01, unsigned per_decade = 8);

// ---------------------------------------------------------------------
// Records

struct ExperimentRecord {
  std::string command;
  json params = json::object();
  json values = json::object();
  double envelope = 0.0;
  double ratio = 0.0;
  bool violation = false;
  std::optional<std::string> error;
  std::string code_version;
  std::string timestamp;

  std::string cache_key() const;
};

/// NaN and infinities are stored as null and read back as NaN.
json to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const json& j);

/// One JSON object per line; blank lines are skipped. Throws
/// std::runtime_error naming the line on malformed input.
std::vector<ExperimentRecord> read_records(std::istream& in);
std::vector<ExperimentRecord> read_records(const std::filesystem::path& path);

inline constexpr std::string_view kCsvHeader =
    "command,d,x,y,S,S1,S2,main_term,abs_error,envelope,ratio";
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

// ---------------------------------------------------------------------
// Commands

inline constexpr std::string_view kCommands[] = {
    "mean",          "smooth-mean",    "jutila",         "large-sieve",
    "polya-verify",  "gauss-verify",   "poisson-verify", "prime-char-sum",
};

bool is_command(std::string_view name);

/// Parameters accepted by a command, with defaults applied by run_point.
std::vector<std::string_view> command_keys(std::string_view command);

/// Evaluates one grid point. Throws std::invalid_argument on bad
/// parameters; invariant violations of verify commands set `violation`.
ExperimentRecord run_point(std::string_view command, const json& params, double eps = 0.01,
                           unsigned threads = 1);

// ---------------------------------------------------------------------
// Sweeps

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SweepSection {
  std::string name;     // section header, "command" or "command:label"
  std::string command;
  std::vector<json> points;  // Cartesian product of the comma lists
};

struct SweepConfig {
  std::filesystem::path out = "ntlab_records.jsonl";
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> cache;  // defaults to `out`
  unsigned threads = 1;
  double eps = 0.01;
  std::vector<SweepSection> sections;
};

/// INI text: top-level out/csv/cache/threads/eps, then one section per
/// command whose keys hold comma-separated value lists. Throws ConfigError.
SweepConfig parse_config(std::istream& in);
SweepConfig load_config(const std::filesystem::path& path);

struct SweepResult {
  std::vector<ExperimentRecord> records;  // grid order
  std::size_t computed = 0;
  std::size_t cached = 0;
  std::size_t failed = 0;
  std::size_t violations = 0;
};

/// Runs every grid point not already in the cache, appending new records
/// to config.out, and rewrites config.csv (if set) in grid order.
SweepResult run_sweep(const SweepConfig& config);

}  // namespace ntlab::lab
