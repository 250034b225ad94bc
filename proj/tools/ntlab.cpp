// ntlab: command-line front end for the experiment runner.
//
// Exit codes: 0 success, 2 configuration or argument error, 3 invariant
// violation reported by a computation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ntlab/lab.hpp"

namespace {

using ntlab::lab::json;

constexpr int kConfigError = 2;
constexpr int kViolation = 3;

struct Flag {
  const char* option;
  const char* key;
  const char* help;
  bool text = false;
};

const std::map<std::string, std::vector<Flag>>& command_flags() {
  static const std::map<std::string, std::vector<Flag>> flags = {
      {"mean",
       {{"--d", "d", "order d (default 2)"},
        {"--x", "x", "prime bound x"},
        {"--y", "y", "average over 2 <= a <= y"},
        {"--a-mode", "a_mode", "all | nonsquare", true},
        {"--mode", "mode", "automatic | character | direct", true}}},
      {"smooth-mean",
       {{"--x", "x", "prime bound x"},
        {"--Y", "Y", "size of the odd squarefree a"},
        {"--U", "U", "window steepness (default x^{1/8} Y^{1/4})"},
        {"--z", "z", "M_z/R_z split point"},
        {"--direct", "direct", "1 to also evaluate S directly (default 1)"},
        {"--poisson-split", "poisson_split", "1 to evaluate S21 by dual sums"}}},
      {"jutila",
       {{"--X", "X", "discriminant bound"},
        {"--Y", "Y", "length of the character sums"},
        {"--convention", "convention", "fundamental | nonsquare", true}}},
      {"large-sieve",
       {{"--Q", "Q", "moduli in (Q, 2Q]"},
        {"--M", "M", "m in (M, 2M]"},
        {"--k", "k", "character order 3, 4 or 6"},
        {"--seed", "seed", "seed of the random +-1 coefficients"}}},
      {"polya-verify",
       {{"--p-max", "p_max", "largest prime modulus"},
        {"--p-min", "p_min", "smallest prime modulus"},
        {"--d", "d", "restrict to one order in {2,3,4,6}"}}},
      {"gauss-verify",
       {{"--k-max", "k_max", "largest odd modulus"},
        {"--k-min", "k_min", "smallest odd modulus"},
        {"--m-max", "m_max", "largest |m| (default 60)"}}},
      {"poisson-verify",
       {{"--k", "k", "odd modulus"},
        {"--X", "X", "scale of d"},
        {"--z", "z", "alpha <= z"},
        {"--U", "U", "window steepness"}}},
      {"prime-char-sum",
       {{"--p", "p", "prime modulus"},
        {"--d", "d", "character group order (default 2)"},
        {"--j", "j", "character index (default 1)"},
        {"--X", "X", "sum over primes <= X"}}},
  };
  return flags;
}

struct PointState {
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> texts;
};

int emit(const ntlab::lab::ExperimentRecord& rec) {
  std::cout << ntlab::lab::to_json(rec).dump() << '\n';
  if (rec.error) return kConfigError;
  return rec.violation ? kViolation : 0;
}

int run_single(const std::string& command, const PointState& state, double eps, unsigned threads,
               const std::optional<std::string>& out, const std::optional<std::string>& cache,
               const std::optional<std::string>& csv) {
  json params = json::object();
  for (const auto& [k, v] : state.numbers) params[k] = v;
  for (const auto& [k, v] : state.texts) params[k] = v;

  ntlab::lab::ExperimentRecord probe;
  probe.command = command;
  probe.params = params;
  probe.code_version = std::string(ntlab::lab::code_version());
  const std::optional<std::string> cache_path = cache ? cache : out;
  if (cache_path) {
    for (const auto& rec : ntlab::lab::read_records(std::filesystem::path(*cache_path)))
      if (rec.cache_key() == probe.cache_key()) return emit(rec);
  }

  const auto rec = ntlab::lab::run_point(command, params, eps, threads);
  if (out) {
    std::ofstream f(*out, std::ios::app);
    if (!f) throw ntlab::lab::ConfigError("out", "cannot open '" + *out + "'");
    f << ntlab::lab::to_json(rec).dump() << '\n';
  }
  if (csv) {
    std::ofstream f(*csv, std::ios::trunc);
    if (!f) throw ntlab::lab::ConfigError("csv", "cannot open '" + *csv + "'");
    ntlab::lab::write_csv(f, {rec});
  }
  return emit(rec);
}

int run_envelope(double x, double y, double eps, unsigned long d) {
  json report = json::object();
  for (auto t : {ntlab::lab::Theorem::resd2, ntlab::lab::Theorem::cubquarsex, ntlab::lab::Theorem::libound}) {
    const auto v = ntlab::lab::envelope_eval(t, x, y, eps, d);
    report[std::string(ntlab::lab::to_string(t))] = {{"plain", v.plain}, {"with_eps", v.with_eps}, {"piece", v.piece}};
  }
  report["x"] = x;
  report["y"] = y;
  report["eps"] = eps;
  report["d"] = d;
  std::cout << report.dump() << '\n';
  return 0;
}

int run_config_sweep(const std::string& path, const std::optional<std::string>& out,
                     const std::optional<std::string>& cache, const std::optional<std::string>& csv,
                     std::optional<unsigned> threads, std::optional<double> eps) {
  auto config = ntlab::lab::load_config(path);
  if (out) config.out = *out;
  if (cache) config.cache = *cache;
  if (csv) config.csv = *csv;
  if (threads) config.threads = *threads;
  if (eps) config.eps = *eps;
  const auto result = ntlab::lab::run_sweep(config);
  std::cerr << "ntlab sweep: " << result.records.size() << " points, " << result.computed << " computed, "
            << result.cached << " cached, " << result.failed << " failed, " << result.violations
            << " violations\n";
  return result.violations > 0 ? kViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ntlab: power-residue prime counts, character sums and their error envelopes"};
  app.require_subcommand(1);

  double eps = 0.01;
  unsigned threads = 1;
  std::optional<std::string> out;
  std::optional<std::string> cache;
  std::optional<std::string> csv;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--eps", eps, "exponent in the (xy)^eps factor (default 0.01)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "append records (JSON lines) to this file");
    sub->add_option("--cache", cache, "record file consulted before computing (default: --out)");
    sub->add_option("--csv", csv, "write a CSV summary");
  };

  std::map<std::string, PointState> states;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, flags] : command_flags()) {
    auto* sub = app.add_subcommand(name, "run one " + name + " point");
    auto& state = states[name];
    for (const auto& f : flags) {
      if (f.text) {
        sub->add_option_function<std::string>(
            f.option, [&state, key = f.key](const std::string& v) { state.texts[key] = v; }, f.help);
      } else {
        sub->add_option_function<double>(
            f.option, [&state, key = f.key](double v) { state.numbers[key] = v; }, f.help);
      }
    }
    add_common(sub);
    subs[name] = sub;
  }

  std::string config_path;
  std::optional<unsigned> sweep_threads;
  std::optional<double> sweep_eps;
  auto* sweep = app.add_subcommand("sweep", "run the grid described by an INI config");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out, "record file (overrides the config)");
  sweep->add_option("--cache", cache, "cache file (overrides the config)");
  sweep->add_option("--csv", csv, "CSV summary (overrides the config)");
  sweep->add_option("--threads", sweep_threads, "parallel grid points")->check(CLI::PositiveNumber);
  sweep->add_option("--eps", sweep_eps, "exponent in the (xy)^eps factor");

  double ex = 0.0;
  double ey = 0.0;
  unsigned long ed = 2;
  auto* env = app.add_subcommand("envelope", "evaluate the error envelopes at (x, y)");
  env->add_option("--x", ex, "x")->required();
  env->add_option("--y", ey, "y")->required();
  env->add_option("--d", ed, "d for the 1/phi(d) factor");
  env->add_option("--eps", eps, "exponent in the (xy)^eps factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (sweep->parsed()) return run_config_sweep(config_path, out, cache, csv, sweep_threads, sweep_eps);
    if (env->parsed()) return run_envelope(ex, ey, eps, ed);
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return run_single(name, states[name], eps, threads, out, cache, csv);
  } catch (const ntlab::lab::ConfigError& e) {
    std::cerr << "ntlab: config error at " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ntlab: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "ntlab: " << e.what() << '\n';
    return 1;
  }
  return kConfigError;
}
