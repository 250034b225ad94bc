#include "ntlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ntlab/arith.hpp"
#include "ntlab/characters.hpp"
#include "ntlab/gauss_poisson.hpp"
#include "ntlab/primes.hpp"
#include "ntlab/residue.hpp"

#ifndef NTLAB_VERSION
#define NTLAB_VERSION "unversioned"
#endif

namespace ntlab::lab {

std::string_view code_version() { return NTLAB_VERSION; }

// ---------------------------------------------------------------------
// Envelopes

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::resd2:
      return "resd2";
    case Theorem::cubquarsex:
      return "cubquarsex";
    default:
      return "libound";
  }
}

Theorem parse_theorem(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "resd2") return Theorem::resd2;
  if (lower == "cubquarsex") return Theorem::cubquarsex;
  if (lower == "libound") return Theorem::libound;
  throw std::invalid_argument("unknown theorem '" + std::string(name) + "'");
}

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

ErrorEnvelope make_envelope(Theorem t) {
  ErrorEnvelope env{t, {}};
  switch (t) {
    case Theorem::cubquarsex: {
      const std::optional<Rational> upper[] = {q(3, 5), q(6, 7),   q(6, 5),  q(3, 2),     q(9, 5),
                                               q(108, 55), q(11, 5), q(5, 2), std::nullopt};
      const Rational xe[] = {q(1, 2), q(4, 3), q(3, 4), q(7, 6), q(5, 6),
                             q(10, 9), q(1, 2), q(2, 3), q(1)};
      const Rational ye[] = {q(0), q(-1, 2), q(0), q(-1, 2), q(0), q(-1, 2), q(7, 10), q(1, 3), q(-1, 2)};
      for (int i = 0; i < 9; ++i) env.pieces.push_back({upper[i], true, xe[i], ye[i], q(0)});
      break;
    }
    case Theorem::libound:
      // x E / log x with E = x^{-1/6} log x for y > x^{2/3}, y^{-1/21} otherwise
      env.pieces.push_back({q(3, 2), false, q(5, 6), q(0), q(0)});
      env.pieces.push_back({std::nullopt, true, q(1), q(-1, 21), q(-1)});
      break;
    case Theorem::resd2:
      env.pieces.push_back({std::nullopt, true, q(1), q(-1, 2), q(1, 2)});
      env.pieces.push_back({std::nullopt, true, q(1, 2), q(0), q(1)});
      break;
  }
  return env;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

const ErrorEnvelope& envelope(Theorem t) {
  static const ErrorEnvelope envelopes[] = {make_envelope(Theorem::resd2),
                                            make_envelope(Theorem::cubquarsex),
                                            make_envelope(Theorem::libound)};
  return envelopes[static_cast<int>(t)];
}

std::size_t select_piece(const ErrorEnvelope& env, double x, double y) {
  if (!(x > 1.0) || !(y > 1.0)) throw std::invalid_argument("envelope: need x, y > 1");
  if (env.theorem == Theorem::resd2) return x / std::log(x) >= y ? 0 : 1;
  const double beta = std::log(x) / std::log(y);
  for (std::size_t i = 0; i < env.pieces.size(); ++i) {
    const auto& piece = env.pieces[i];
    if (!piece.upper) return i;
    const double b = to_double(*piece.upper);
    if (beta < b || (beta == b && piece.upper_closed)) return i;
  }
  return env.pieces.size() - 1;
}

Rational exponent_on_curve(const EnvelopePiece& piece, Rational beta) {
  return beta * piece.x_exponent + piece.y_exponent;
}

std::vector<Rational> continuity_defects(const ErrorEnvelope& env) {
  std::vector<Rational> defects;
  for (std::size_t i = 0; i + 1 < env.pieces.size(); ++i) {
    const auto& left = env.pieces[i];
    const auto& right = env.pieces[i + 1];
    if (!left.upper) continue;
    if (exponent_on_curve(left, *left.upper) != exponent_on_curve(right, *left.upper) ||
        left.log_exponent != right.log_exponent)
      defects.push_back(*left.upper);
  }
  return defects;
}

EnvelopeValue envelope_eval(Theorem t, double x, double y, double eps, u64 d) {
  const ErrorEnvelope& env = envelope(t);
  EnvelopeValue v;
  v.piece = select_piece(env, x, y);
  const auto& p = env.pieces[v.piece];
  const double lx = std::log(x);
  v.plain = std::exp(to_double(p.x_exponent) * lx + to_double(p.y_exponent) * std::log(y)) *
            std::pow(lx, to_double(p.log_exponent));
  if (t == Theorem::libound) {
    if (d == 0) throw std::invalid_argument("envelope: d must be positive");
    v.plain /= static_cast<double>(arith::euler_phi(d));
  }
  // only the d in {3,4,6} bound carries (xy)^eps
  v.with_eps = t == Theorem::cubquarsex ? v.plain * std::pow(x * y, eps) : v.plain;
  return v;
}

DominanceReport dominance_check(Theorem theorem, double eps, unsigned per_decade) {
  if (theorem == Theorem::libound)
    throw std::invalid_argument("dominance_check: compare resd2 or cubquarsex against libound");
  if (per_decade == 0) throw std::invalid_argument("dominance_check: per_decade must be positive");
  DominanceReport report;
  report.theorem = theorem;
  report.worst.ratio = -1.0;
  const unsigned ny = 6 * per_decade;
  const unsigned nx = 14 * per_decade;
  for (unsigned iy = 0; iy <= ny; ++iy) {
    const double y = std::pow(10.0, 2.0 + static_cast<double>(iy) / per_decade);
    for (unsigned ix = 0; ix <= nx; ++ix) {
      const double x = std::pow(10.0, 2.0 + static_cast<double>(ix) / per_decade);
      const double fresh = envelope_eval(theorem, x, y, eps).with_eps;
      // libound with phi(d) = 1, times the log x it divides by
      const double old = envelope_eval(Theorem::libound, x, y, eps, 1).plain * std::log(x);
      const double ratio = fresh / old;
      ++report.points;
      if (ratio > report.worst.ratio) report.worst = {x, y, ratio};
    }
  }
  return report;
}

// ---------------------------------------------------------------------
// Records

namespace {

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string ExperimentRecord::cache_key() const {
  return command + "|" + params.dump() + "|" + code_version;
}

json to_json(const ExperimentRecord& r) {
  json j;
  j["command"] = r.command;
  j["params"] = r.params;
  j["values"] = r.values;
  j["envelope"] = number_or_null(r.envelope);
  j["ratio"] = number_or_null(r.ratio);
  j["violation"] = r.violation;
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  j["code_version"] = r.code_version;
  j["timestamp"] = r.timestamp;
  return j;
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord r;
  r.command = j.at("command").get<std::string>();
  r.params = j.at("params");
  r.values = j.at("values");
  r.envelope = number_from(j.at("envelope"));
  r.ratio = number_from(j.at("ratio"));
  r.violation = j.at("violation").get<bool>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  r.code_version = j.at("code_version").get<std::string>();
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

std::vector<ExperimentRecord> read_records(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw std::runtime_error("record line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ExperimentRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  return read_records(in);
}

namespace {

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = obj.find(k);
    if (it == obj.end() || it->is_null()) continue;
    if (it->is_number()) return csv_number(it->get<double>());
  }
  return "";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.command << ',' << csv_field(r.params, {"d", "k"}) << ','
        << csv_field(r.params, {"x", "X"}) << ',' << csv_field(r.params, {"y", "Y"}) << ','
        << csv_field(r.values, {"S"}) << ',' << csv_field(r.values, {"S1"}) << ','
        << csv_field(r.values, {"S2"}) << ',' << csv_field(r.values, {"main_term"}) << ','
        << csv_field(r.values, {"abs_error"}) << ',' << csv_number(r.envelope) << ','
        << csv_number(r.ratio) << '\n';
  }
}

// ---------------------------------------------------------------------
// Commands

bool is_command(std::string_view name) {
  return std::find(std::begin(kCommands), std::end(kCommands), name) != std::end(kCommands);
}

std::vector<std::string_view> command_keys(std::string_view command) {
  if (command == "mean") return {"d", "x", "y", "a_mode", "mode"};
  if (command == "smooth-mean") return {"x", "Y", "U", "z", "direct", "poisson_split"};
  if (command == "jutila") return {"X", "Y", "convention"};
  if (command == "large-sieve") return {"Q", "M", "k", "seed"};
  if (command == "polya-verify") return {"p_min", "p_max", "d"};
  if (command == "gauss-verify") return {"k_min", "k_max", "m_max"};
  if (command == "poisson-verify") return {"k", "X", "z", "U"};
  if (command == "prime-char-sum") return {"p", "d", "j", "X"};
  throw std::invalid_argument("unknown command '" + std::string(command) + "'");
}

namespace {

bool is_string_key(std::string_view key) {
  return key == "a_mode" || key == "mode" || key == "convention";
}

class Params {
 public:
  explicit Params(const json& p) : p_(p) {
    if (!p_.is_object()) throw std::invalid_argument("parameters must be an object");
  }

  bool has(const char* key) const { return p_.contains(key) && !p_.at(key).is_null(); }

  double real(const char* key) const {
    if (!has(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
    const json& v = p_.at(key);
    if (!v.is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
  }
  double real(const char* key, double fallback) const { return has(key) ? real(key) : fallback; }

  u64 integer(const char* key) const {
    const double v = real(key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15)
      throw std::invalid_argument(std::string("parameter '") + key + "' must be a non-negative integer");
    return static_cast<u64>(v);
  }
  u64 integer(const char* key, u64 fallback) const { return has(key) ? integer(key) : fallback; }

  std::string text(const char* key, const char* fallback) const {
    if (!has(key)) return fallback;
    const json& v = p_.at(key);
    if (!v.is_string()) throw std::invalid_argument(std::string("parameter '") + key + "' must be text");
    return v.get<std::string>();
  }

 private:
  const json& p_;
};

residue::AMode parse_a_mode(const std::string& s) {
  if (s == "all") return residue::AMode::all;
  if (s == "nonsquare") return residue::AMode::nonsquare;
  throw std::invalid_argument("a_mode must be 'all' or 'nonsquare', got '" + s + "'");
}

residue::EvalMode parse_eval_mode(const std::string& s) {
  if (s == "automatic") return residue::EvalMode::automatic;
  if (s == "character") return residue::EvalMode::character;
  if (s == "direct") return residue::EvalMode::direct;
  throw std::invalid_argument("mode must be automatic, character or direct, got '" + s + "'");
}

characters::DiscriminantConvention parse_convention(const std::string& s) {
  if (s == "fundamental") return characters::DiscriminantConvention::fundamental;
  if (s == "nonsquare") return characters::DiscriminantConvention::nonsquare;
  throw std::invalid_argument("convention must be 'fundamental' or 'nonsquare', got '" + s + "'");
}

double safe_ratio(double num, double den) {
  if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

void run_mean(const Params& p, ExperimentRecord& r, double eps, unsigned threads) {
  residue::MeanValueOptions opt;
  opt.a_mode = parse_a_mode(p.text("a_mode", "all"));
  opt.mode = parse_eval_mode(p.text("mode", "automatic"));
  opt.threads = threads;
  const u64 d = p.integer("d", 2);
  const double x = p.real("x");
  const double y = p.real("y");
  const auto m = residue::mean_value(d, x, y, opt);
  r.values = {{"S", m.S},
              {"S1", m.S1},
              {"S2", m.S2},
              {"main_term", m.main_term},
              {"abs_error", m.abs_error},
              {"primes_used", m.primes_used},
              {"principal_count", m.principal_count},
              {"character_count", m.character_count},
              {"direct_count", m.direct_count},
              {"eval_mode", residue::to_string(m.mode)}};
  Theorem t = Theorem::libound;
  if (d == 2) t = Theorem::resd2;
  else if (d == 3 || d == 4 || d == 6) t = Theorem::cubquarsex;
  const EnvelopeValue env = envelope_eval(t, x, y, eps, d);
  r.values["envelope_theorem"] = to_string(t);
  r.values["envelope_eps"] = number_or_null(env.with_eps);
  r.envelope = env.plain;
  r.ratio = safe_ratio(m.abs_error, env.plain);
  const double split = m.S1 + m.S2;
  r.violation = std::abs(m.S - split) > 1e-9 * std::max(1.0, std::abs(m.S)) ||
                m.S > static_cast<double>(primes::pi(static_cast<u64>(std::floor(x))));
}

void run_smooth_mean(const Params& p, ExperimentRecord& r) {
  gauss_poisson::SmoothedMeanOptions opt;
  if (p.has("U")) opt.U = p.real("U");
  if (p.has("z")) opt.z = p.real("z");
  opt.direct = p.integer("direct", 1) != 0;
  opt.poisson_split = p.integer("poisson_split", 0) != 0;
  const auto s = gauss_poisson::smoothed_mean(p.real("x"), p.real("Y"), opt);
  r.values = {{"S", s.S},
              {"S_direct", number_or_null(s.S_direct)},
              {"S1", s.S1},
              {"S2", s.S2},
              {"S21", s.S21},
              {"S22", s.S22},
              {"main_term", s.main},
              {"abs_error", s.abs_error},
              {"count_D", s.count_D},
              {"U", s.U},
              {"z", s.z}};
  if (s.poisson_split) {
    r.values["S21_poisson"] = s.S21_poisson;
    r.values["S_sq"] = s.S_sq;
    r.values["S_nonsq"] = s.S_nonsq;
  }
  r.envelope = s.envelope;
  r.ratio = safe_ratio(s.abs_error, s.envelope);
  if (opt.direct) r.violation = std::abs(s.S - s.S_direct) > 1e-9 * std::max(1.0, std::abs(s.S));
}

void run_jutila(const Params& p, ExperimentRecord& r) {
  const u64 X = p.integer("X");
  const u64 Y = p.integer("Y");
  const auto conv = parse_convention(p.text("convention", "fundamental"));
  const auto j = characters::jutila_statistic(X, Y, conv);
  r.values = {{"lhs", j.lhs}, {"lhs_exact", j.lhs_exact}, {"characters", j.characters}};
  const double lx = std::log(static_cast<double>(X));
  r.envelope = static_cast<double>(X) * static_cast<double>(Y) * lx * lx;
  r.ratio = number_from(number_or_null(j.bound_ratio));
}

void run_large_sieve(const Params& p, ExperimentRecord& r) {
  const u64 Q = p.integer("Q");
  const u64 M = p.integer("M");
  const auto k = static_cast<unsigned>(p.integer("k", 3));
  std::mt19937_64 rng(p.integer("seed", 1));
  std::vector<std::int64_t> coeffs(M, 0);
  for (u64 i = 0; i < M; ++i) {
    const std::int64_t sign = (rng() & 1) ? 1 : -1;
    if (arith::is_squarefree(M + 1 + i)) coeffs[i] = sign;
  }
  const auto ls = characters::large_sieve_statistic(Q, M, k, coeffs);
  r.values = {{"lhs", ls.lhs},
              {"lhs_exact", ls.lhs_exact},
              {"moduli", ls.moduli},
              {"characters", ls.characters},
              {"coefficient_energy", ls.coefficient_energy}};
  r.envelope = ls.envelope;
  r.ratio = ls.ratio;
}

void run_polya(const Params& p, ExperimentRecord& r) {
  const u64 lo = std::max<u64>(3, p.integer("p_min", 3));
  const u64 hi = p.integer("p_max");
  const u64 only_d = p.integer("d", 0);
  if (only_d != 0 && only_d != 2 && only_d != 3 && only_d != 4 && only_d != 6)
    throw std::invalid_argument("polya-verify: d must be 2, 3, 4 or 6");
  characters::PolyaVinogradovReport worst;
  u64 checked = 0;
  for (u64 q : primes::primes_below(hi + 1)) {
    if (q < lo) continue;
    for (unsigned d : {2u, 3u, 4u, 6u}) {
      if ((only_d != 0 && d != only_d) || (q - 1) % d != 0) continue;
      const auto rep = characters::polya_vinogradov_check(q, d);
      ++checked;
      if (rep.max_ratio > worst.max_ratio) worst = rep;
    }
  }
  r.values = {{"checked", checked},     {"max_ratio", worst.max_ratio}, {"witness_p", worst.p},
              {"witness_d", worst.d},   {"witness_j", worst.j},         {"witness_M", worst.M},
              {"witness_N", worst.N}};
  r.envelope = 1.0;
  r.ratio = worst.max_ratio;
  r.violation = worst.max_ratio >= 1.0;
}

void run_gauss(const Params& p, ExperimentRecord& r) {
  const u64 lo = std::max<u64>(1, p.integer("k_min", 1));
  const u64 hi = p.integer("k_max");
  const auto m_max = static_cast<std::int64_t>(p.integer("m_max", 60));
  double worst = 0.0;
  u64 wk = 0;
  std::int64_t wm = 0;
  u64 checked = 0;
  for (u64 k = lo | 1; k <= hi; k += 2) {
    const gauss_poisson::GaussSums sums(k);
    const auto factors = arith::factorize(k);
    for (std::int64_t m = -m_max; m <= m_max; ++m) {
      const double formula = gauss_poisson::G_formula(factors, m);
      const double err = std::abs(sums.G(m) - std::complex<double>(formula, 0.0)) /
                         std::max(1.0, std::abs(formula));
      ++checked;
      if (err > worst) {
        worst = err;
        wk = k;
        wm = m;
      }
    }
  }
  r.values = {{"checked", checked}, {"max_rel_err", worst}, {"witness_k", wk}, {"witness_m", wm}};
  r.envelope = 1e-6;
  r.ratio = worst / 1e-6;
  r.violation = worst > 1e-6;
}

void run_poisson(const Params& p, ExperimentRecord& r) {
  const gauss_poisson::SmoothWindow window(p.real("U"));
  const auto c = gauss_poisson::poisson_identity_check(p.integer("k"), p.real("X"), p.real("z"), window);
  r.values = {{"lhs", c.lhs}, {"rhs", c.rhs}, {"rel_err", c.rel_err}, {"m_cap", c.m_cap}, {"alphas", c.alphas}};
  r.envelope = 1e-6;
  r.ratio = c.rel_err / 1e-6;
  r.violation = !(c.rel_err <= 1e-6);
}

void run_prime_char_sum(const Params& p, ExperimentRecord& r) {
  const characters::CharacterTable table(p.integer("p"), static_cast<unsigned>(p.integer("d", 2)));
  const auto j = static_cast<unsigned>(p.integer("j", 1));
  const double X = p.real("X");
  const auto s = characters::prime_char_sum_statistic(table, j, X);
  r.values = {{"sum_re", s.value.real()}, {"sum_im", s.value.imag()}, {"abs_sum", std::abs(s.value)}};
  r.envelope = X >= 2.0 ? std::sqrt(X) * std::log(static_cast<double>(table.modulus()) * X) : 0.0;
  r.ratio = s.grh_ratio;
}

}  // namespace

ExperimentRecord run_point(std::string_view command, const json& params, double eps, unsigned threads) {
  if (!is_command(command))
    throw std::invalid_argument("unknown command '" + std::string(command) + "'");
  const auto keys = command_keys(command);
  for (const auto& [key, value] : params.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw std::invalid_argument("unknown parameter '" + key + "' for " + std::string(command));

  ExperimentRecord r;
  r.command = std::string(command);
  r.params = params;
  r.code_version = std::string(code_version());
  r.timestamp = utc_timestamp();
  const Params p(params);
  if (command == "mean") run_mean(p, r, eps, threads);
  else if (command == "smooth-mean") run_smooth_mean(p, r);
  else if (command == "jutila") run_jutila(p, r);
  else if (command == "large-sieve") run_large_sieve(p, r);
  else if (command == "polya-verify") run_polya(p, r);
  else if (command == "gauss-verify") run_gauss(p, r);
  else if (command == "poisson-verify") run_poisson(p, r);
  else run_prime_char_sum(p, r);
  return r;
}

// ---------------------------------------------------------------------
// Config

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  if (trim(raw).empty()) return out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

void expand_grid(const std::vector<std::pair<std::string, std::vector<json>>>& axes, std::size_t axis,
                 json& current, std::vector<json>& out) {
  if (axis == axes.size()) {
    out.push_back(current);
    return;
  }
  for (const auto& v : axes[axis].second) {
    current[axes[axis].first] = v;
    expand_grid(axes, axis + 1, current, out);
  }
  current.erase(axes[axis].first);
}

}  // namespace

SweepConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  SweepConfig config;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      const std::string value = trim(node.data());
      if (name == "out") {
        config.out = value;
      } else if (name == "csv") {
        config.csv = value;
      } else if (name == "cache") {
        config.cache = value;
      } else if (name == "threads") {
        const auto v = parse_number(value);
        if (!v || *v < 1.0 || *v != std::floor(*v) || *v > 1024.0)
          throw ConfigError(name, "expected a positive integer, got '" + value + "'");
        config.threads = static_cast<unsigned>(*v);
      } else if (name == "eps") {
        const auto v = parse_number(value);
        if (!v || !(*v >= 0.0)) throw ConfigError(name, "expected a non-negative number, got '" + value + "'");
        config.eps = *v;
      } else if (is_command(name.substr(0, name.find(':')))) {
        // a section without keys: no grid
        config.sections.push_back({name, name.substr(0, name.find(':')), {}});
      } else {
        throw ConfigError(name, "unknown setting");
      }
      continue;
    }

    SweepSection section;
    section.name = name;
    section.command = name.substr(0, name.find(':'));
    if (!is_command(section.command)) throw ConfigError(name, "unknown command section");
    const auto keys = command_keys(section.command);
    std::vector<std::pair<std::string, std::vector<json>>> axes;
    bool empty_axis = false;
    for (const auto& [key, leaf] : node) {
      const std::string where = name + "." + key;
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ConfigError(where, "unknown parameter for " + section.command);
      std::vector<json> values;
      for (const auto& item : split_list(leaf.data())) {
        if (item.empty()) throw ConfigError(where, "empty list element");
        if (is_string_key(key)) {
          values.emplace_back(item);
        } else {
          const auto v = parse_number(item);
          if (!v) throw ConfigError(where, "expected a number, got '" + item + "'");
          values.emplace_back(*v);
        }
      }
      if (values.empty()) empty_axis = true;
      axes.emplace_back(key, std::move(values));
    }
    if (!empty_axis) {
      json current = json::object();
      expand_grid(axes, 0, current, section.points);
    }
    config.sections.push_back(std::move(section));
  }
  return config;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  return parse_config(in);
}

// ---------------------------------------------------------------------
// Sweeps

SweepResult run_sweep(const SweepConfig& config) {
  std::map<std::string, ExperimentRecord> cache;
  for (auto& rec : read_records(config.cache.value_or(config.out))) {
    const std::string key = rec.cache_key();
    cache.insert_or_assign(key, std::move(rec));
  }

  struct Job {
    std::string command;
    json params;
  };
  std::vector<Job> grid;
  for (const auto& s : config.sections)
    for (const auto& p : s.points) grid.push_back({s.command, p});

  SweepResult result;
  result.records.resize(grid.size());
  std::vector<std::size_t> pending;
  std::map<std::string, std::size_t> first_seen;
  std::vector<std::optional<std::size_t>> alias(grid.size());
  const std::string version(code_version());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ExperimentRecord probe;
    probe.command = grid[i].command;
    probe.params = grid[i].params;
    probe.code_version = version;
    const std::string key = probe.cache_key();
    if (auto it = cache.find(key); it != cache.end()) {
      result.records[i] = it->second;
      ++result.cached;
    } else if (auto seen = first_seen.find(key); seen != first_seen.end()) {
      alias[i] = seen->second;
    } else {
      first_seen.emplace(key, i);
      pending.push_back(i);
    }
  }

  if (!pending.empty()) {
    if (config.out.has_parent_path()) std::filesystem::create_directories(config.out.parent_path());
    std::ofstream out(config.out, std::ios::app);
    if (!out) throw std::runtime_error("cannot open record file '" + config.out.string() + "'");
    std::mutex writer;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t n = next++; n < pending.size(); n = next++) {
        const std::size_t i = pending[n];
        ExperimentRecord rec;
        try {
          rec = run_point(grid[i].command, grid[i].params, config.eps);
        } catch (const std::exception& e) {
          rec.command = grid[i].command;
          rec.params = grid[i].params;
          rec.envelope = std::numeric_limits<double>::quiet_NaN();
          rec.ratio = std::numeric_limits<double>::quiet_NaN();
          rec.error = e.what();
          rec.code_version = version;
          rec.timestamp = utc_timestamp();
        }
        const std::lock_guard lock(writer);
        out << to_json(rec).dump() << '\n';
        out.flush();
        result.records[i] = std::move(rec);
      }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(config.threads, pending.size()));
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
      worker();
    }
    result.computed = pending.size();
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (alias[i]) result.records[i] = result.records[*alias[i]];

  for (const auto& r : result.records) {
    if (r.error) ++result.failed;
    if (r.violation) ++result.violations;
  }
  if (config.csv) {
    if (config.csv->has_parent_path()) std::filesystem::create_directories(config.csv->parent_path());
    std::ofstream csv(*config.csv, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot open csv file '" + config.csv->string() + "'");
    write_csv(csv, result.records);
  }
  return result;
}

}  // namespace ntlab::lab
