#include "ntlab/gauss_poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ntlab/primes.hpp"
#include "ntlab/quadrature.hpp"

namespace ntlab::gauss_poisson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_odd(u64 k, const char* who) {
  if (k == 0 || k % 2 == 0)
    throw std::invalid_argument(std::string(who) + ": modulus must be odd and positive");
}

// cos(pi r) and sin(pi r) with the argument reduced mod 2 first
double cos_pi(double r) { return std::cos(kPi * std::fmod(r, 2.0)); }
double sin_pi(double r) { return std::sin(kPi * std::fmod(r, 2.0)); }

}  // namespace

// ---------------------------------------------------------------------
// Gauss-type sums

GaussSums::GaussSums(u64 k) : k_(k), symbol_(k), roots_(k) {
  require_odd(k, "GaussSums");
  for (u64 a = 0; a < k; ++a) {
    symbol_[a] = arith::jacobi(static_cast<i64>(a), static_cast<i64>(k));
    const double angle = kTwoPi * static_cast<double>(a) / static_cast<double>(k);
    roots_[a] = {std::cos(angle), std::sin(angle)};
  }
}

std::complex<double> GaussSums::tau(i64 m) const {
  const u64 mm = arith::reduce(m, k_);
  std::complex<double> s{0.0, 0.0};
  u64 r = 0;  // a * m mod k
  for (u64 a = 0; a < k_; ++a) {
    if (symbol_[a] > 0) s += roots_[r];
    else if (symbol_[a] < 0) s -= roots_[r];
    r += mm;
    if (r >= k_) r -= k_;
  }
  return s;
}

std::complex<double> GaussSums::G(i64 m) const {
  const std::complex<double> t = tau(m);
  // (1+i)/2 + (-1/k)(1-i)/2 is 1 for k = 1 mod 4 and i for k = 3 mod 4
  if (k_ % 4 == 1) return t;
  return {t.imag(), -t.real()};
}

std::complex<double> tau_m(u64 k, i64 m) { return GaussSums(k).tau(m); }

std::complex<double> G_direct(u64 k, i64 m) { return GaussSums(k).G(m); }

double G_formula(const std::vector<arith::PrimePower>& factors, i64 m) {
  double value = 1.0;
  for (const auto& [p, b] : factors) {
    // a = v_p(m), unbounded for m = 0
    unsigned a = std::numeric_limits<unsigned>::max();
    i64 rest = m;
    if (m != 0) {
      a = 0;
      while (rest % static_cast<i64>(p) == 0) {
        rest /= static_cast<i64>(p);
        ++a;
      }
    }
    double local;
    if (b <= a) {
      local = (b % 2 == 1) ? 0.0 : std::pow(static_cast<double>(p), b) - std::pow(static_cast<double>(p), b - 1);
    } else if (b == a + 1) {
      const double pa = std::pow(static_cast<double>(p), a);
      if (b % 2 == 0) local = -pa;
      else local = arith::jacobi(rest, static_cast<i64>(p)) * pa * std::sqrt(static_cast<double>(p));
    } else {
      local = 0.0;
    }
    value *= local;
    if (value == 0.0) return 0.0;
  }
  return value;
}

std::complex<double> G_formula(u64 k, i64 m) {
  require_odd(k, "G_formula");
  return {G_formula(arith::factorize(k), m), 0.0};
}

// ---------------------------------------------------------------------
// Smooth window

double ramp(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double left = std::exp(-1.0 / u);
  const double right = std::exp(-1.0 / (1.0 - u));
  return left / (left + right);
}

SmoothWindow::SmoothWindow(double U) : U_(U) {
  if (!(U >= 4.0))
    throw std::invalid_argument("SmoothWindow: need U >= 4, got " + std::to_string(U));
}

double SmoothWindow::operator()(double t) const {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  return ramp(U_ * (t - 1.0)) * ramp(U_ * (2.0 - t));
}

Jet<SmoothWindow::kJetOrder> SmoothWindow::jet(double t) const {
  using J = Jet<kJetOrder>;
  const J v = J::variable(t);
  const J left = U_ * (v - J::constant(1.0));
  const J right = U_ * (J::constant(2.0) - v);
  return ramp(left) * ramp(right);
}

double SmoothWindow::derivative(std::size_t j, double t) const {
  if (j > kJetOrder) throw std::invalid_argument("SmoothWindow: derivative order too high");
  return jet(t).derivative(j);
}

namespace {

using RampJet = Jet<SmoothWindow::kJetOrder>;

struct RampConstants {
  std::array<double, SmoothWindow::kMaxDerivative + 1> sup{};
  std::array<double, SmoothWindow::kJetOrder + 1> l1{};
};

const RampConstants& ramp_constants() {
  static const RampConstants constants = [] {
    RampConstants c;
    constexpr int kGrid = 20000;
    for (int i = 0; i <= kGrid; ++i) {
      const RampJet r = ramp(RampJet::variable(static_cast<double>(i) / kGrid));
      for (std::size_t j = 0; j <= SmoothWindow::kMaxDerivative; ++j)
        c.sup[j] = std::max(c.sup[j], std::abs(r.derivative(j)));
    }
    for (auto& v : c.sup) v *= 1.05;
    const quad::GaussLegendre rule(6);
    constexpr std::size_t kPanels = 4000;
    const double h = 1.0 / kPanels;
    for (std::size_t p = 0; p < kPanels; ++p) {
      const double mid = (p + 0.5) * h;
      for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const RampJet r = ramp(RampJet::variable(mid + 0.5 * h * rule.nodes[n]));
        for (std::size_t j = 0; j <= SmoothWindow::kJetOrder; ++j)
          c.l1[j] += 0.5 * h * rule.weights[n] * std::abs(r.derivative(j));
      }
    }
    for (auto& v : c.l1) v *= 1.05;
    return c;
  }();
  return constants;
}

}  // namespace

const std::array<double, SmoothWindow::kMaxDerivative + 1>& SmoothWindow::derivative_bounds() const {
  return ramp_constants().sup;
}

double SmoothWindow::derivative_l1(std::size_t j) const {
  if (j > kJetOrder) throw std::invalid_argument("SmoothWindow: derivative order too high");
  if (j == 0) return 1.0;
  return 2.0 * std::pow(U_, static_cast<double>(j) - 1.0) * ramp_constants().l1[j];
}

double tilde_transform(const SmoothWindow& window, double xi) {
  const double U = window.U();
  const double w = kTwoPi * xi;
  auto integrand = [&](double x) { return (std::cos(w * x) + std::sin(w * x)) * window(x); };
  const int panels = 16 + 4 * static_cast<int>(std::ceil(std::abs(xi) / U));
  const double a = 1.0 + 1.0 / U;
  const double b = 2.0 - 1.0 / U;
  const double edges = quad::adaptive_simpson(integrand, 1.0, a, 1e-13, panels) +
                       quad::adaptive_simpson(integrand, b, 2.0, 1e-13, panels);
  double plateau;
  if (xi == 0.0) {
    plateau = b - a;
  } else {
    auto antiderivative = [&](double x) { return std::sin(w * x) - std::cos(w * x); };
    plateau = (antiderivative(b) - antiderivative(a)) / w;
  }
  return edges + plateau;
}

TildeEvaluator::TildeEvaluator(const SmoothWindow& window, double nu_max)
    : window_(&window), nu_max_(std::max(nu_max, 1.0)) {
  const quad::GaussLegendre rule(16);
  panels_ = 32 + static_cast<std::size_t>(std::ceil(4.0 * nu_max_));
  const double h = 1.0 / static_cast<double>(panels_);
  offsets_.resize(rule.nodes.size());
  for (std::size_t n = 0; n < rule.nodes.size(); ++n) offsets_[n] = 0.5 * h * rule.nodes[n];
  weighted_ramp_.resize(panels_ * rule.nodes.size());
  for (std::size_t p = 0; p < panels_; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t n = 0; n < rule.nodes.size(); ++n)
      weighted_ramp_[p * rule.nodes.size() + n] =
          0.5 * h * rule.weights[n] * ramp(mid + offsets_[n]);
  }
}

double TildeEvaluator::centered_cosine(double xi) const {
  const double U = window_->U();
  const double nu = xi / U;
  const double theta = kTwoPi * nu;
  const std::size_t nodes = offsets_.size();
  const double h = 1.0 / static_cast<double>(panels_);

  // int_0^1 r(u) e(nu u) du on the fixed grid
  std::vector<std::complex<double>> phase(nodes);
  for (std::size_t n = 0; n < nodes; ++n) phase[n] = std::polar(1.0, theta * offsets_[n]);
  const std::complex<double> step = std::polar(1.0, theta * h);
  std::complex<double> rot;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t p = 0; p < panels_; ++p) {
    if (p % 32 == 0) rot = std::polar(1.0, theta * (static_cast<double>(p) + 0.5) * h);
    std::complex<double> panel{0.0, 0.0};
    const double* wr = &weighted_ramp_[p * nodes];
    for (std::size_t n = 0; n < nodes; ++n) panel += wr[n] * phase[n];
    acc += rot * panel;
    rot *= step;
  }
  const double ic = acc.real();
  const double is = acc.imag();

  double flat;
  if (xi == 0.0) {
    flat = 0.5 - 1.0 / U;
  } else {
    flat = sin_pi(2.0 * xi * (0.5 - 1.0 / U)) / (kTwoPi * xi);
  }
  const double edge = (cos_pi(xi) * ic + sin_pi(xi) * is) / U;
  return 2.0 * (flat + edge);
}

std::pair<double, double> TildeEvaluator::pair(double xi) const {
  if (std::abs(xi) > window_->U() * nu_max_ * (1.0 + 1e-12))
    return {tilde_transform(*window_, xi), tilde_transform(*window_, -xi)};
  const double f = centered_cosine(xi);
  const double c = cos_pi(3.0 * xi);
  const double s = sin_pi(3.0 * xi);
  return {(c + s) * f, (c - s) * f};
}

double TildeEvaluator::operator()(double xi) const { return pair(xi).first; }

u64 certified_m_cap(const SmoothWindow& window, double c, double weight, double target) {
  if (!(c > 0.0) || !(target > 0.0))
    throw std::invalid_argument("certified_m_cap: need c > 0 and target > 0");
  if (weight <= 0.0) return 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 2; j <= SmoothWindow::kJetOrder; ++j) {
    // tail <= weight * 2 sqrt(2) ||Phi^{(j)}||_1 (2 pi c)^{-j} M^{1-j} / (j-1)
    const double log_a = std::log(weight) + std::log(2.0 * std::numbers::sqrt2) +
                         std::log(window.derivative_l1(j)) -
                         static_cast<double>(j) * std::log(kTwoPi * c) -
                         std::log(static_cast<double>(j) - 1.0);
    const double log_m = (log_a - std::log(target)) / (static_cast<double>(j) - 1.0);
    best = std::min(best, log_m);
  }
  if (best > std::log(1e12)) throw std::runtime_error("certified_m_cap: dual sum too long");
  return std::max<u64>(1, static_cast<u64>(std::ceil(std::exp(best))));
}

// ---------------------------------------------------------------------
// mu^2 = M_z + R_z

namespace {

MzRz mz_rz_from(const std::vector<arith::PrimePower>& factors, double z) {
  // l^2 | a with mu(l) != 0 exactly when l is a product of distinct primes
  // whose exponent in a is at least 2
  std::vector<u64> doubled;
  for (const auto& f : factors)
    if (f.exponent >= 2) doubled.push_back(f.prime);
  MzRz out;
  const std::size_t subsets = std::size_t{1} << doubled.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    long double l = 1.0L;
    int sign = 1;
    for (std::size_t i = 0; i < doubled.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        l *= static_cast<long double>(doubled[i]);
        sign = -sign;
      }
    }
    if (l <= static_cast<long double>(z)) out.M += sign;
    else out.R += sign;
  }
  return out;
}

}  // namespace

MzRz mz_rz(u64 a, double z) {
  if (a == 0) throw std::invalid_argument("mz_rz: a must be positive");
  return mz_rz_from(arith::factorize(a), z);
}

MzRz mz_rz(u64 a, double z, const arith::SmallestFactorTable& spf) {
  if (a == 0) throw std::invalid_argument("mz_rz: a must be positive");
  return mz_rz_from(spf.factorize(a), z);
}

// ---------------------------------------------------------------------
// Poisson summation

namespace {

bool is_positive_square(u64 m) {
  const u64 r = arith::isqrt(m);
  return r * r == m;
}

DualSum dual_sum_with(const std::vector<arith::PrimePower>& factors, u64 k, double X, u64 alpha,
                      const SmoothWindow& window, double target, std::optional<u64> m_cap) {
  const double c = X / (2.0 * static_cast<double>(alpha) * static_cast<double>(alpha) *
                        static_cast<double>(k));
  const u64 needed = certified_m_cap(window, c, static_cast<double>(k), target);
  if (m_cap && *m_cap < needed)
    throw std::invalid_argument("dual_sum: m_cap " + std::to_string(*m_cap) +
                                " below the certified tail cutoff " + std::to_string(needed));
  const u64 M = m_cap.value_or(needed);
  const TildeEvaluator tilde(window, static_cast<double>(M) * c / window.U() + 1.0);
  const int minus_one = arith::jacobi(-1, static_cast<i64>(k));

  DualSum out;
  out.m_cap = M;
  out.zero = G_formula(factors, 0) * tilde(0.0);
  for (u64 m = 1; m <= M; ++m) {
    const double g = G_formula(factors, static_cast<i64>(m));
    if (g == 0.0) continue;
    const auto [plus, minus] = tilde.pair(static_cast<double>(m) * c);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double pos = sign * g * plus;
    const double neg = sign * minus_one * g * minus;  // G_{-m}(k) = (-1/k) G_m(k)
    if (is_positive_square(m)) out.square += pos;
    else out.nonsquare += pos;
    out.nonsquare += neg;
  }
  return out;
}

std::vector<u64> admissible_alphas(double z, u64 k) {
  std::vector<u64> out;
  if (z < 1.0) return out;
  const u64 top = static_cast<u64>(std::floor(z));
  for (u64 alpha = 1; alpha <= top; alpha += 2) {
    if (std::gcd(alpha, k) != 1) continue;
    if (arith::mobius(alpha) == 0) continue;
    out.push_back(alpha);
  }
  return out;
}

}  // namespace

DualSum dual_sum(u64 k, double X, u64 alpha, const SmoothWindow& window, double target,
                 std::optional<u64> m_cap) {
  require_odd(k, "dual_sum");
  if (alpha == 0) throw std::invalid_argument("dual_sum: alpha must be positive");
  return dual_sum_with(arith::factorize(k), k, X, alpha, window, target, m_cap);
}

PoissonCheck poisson_identity_check(u64 k, double X, double z, const SmoothWindow& window,
                                    std::optional<u64> m_cap) {
  require_odd(k, "poisson_identity_check");
  if (!(X > 0.0)) throw std::invalid_argument("poisson_identity_check: need X > 0");
  PoissonCheck out;

  const u64 lo = static_cast<u64>(std::floor(X)) + 1;
  const u64 hi = static_cast<u64>(std::ceil(2.0 * X));
  for (u64 d = lo | 1; d < hi; d += 2) {
    const double w = window(static_cast<double>(d) / X);
    if (w == 0.0) continue;
    const int chi = arith::jacobi(static_cast<i64>(d), static_cast<i64>(k));
    if (chi == 0) continue;
    out.lhs += static_cast<double>(mz_rz(d, z).M * chi) * w;
  }

  const auto factors = arith::factorize(k);
  const auto alphas = admissible_alphas(z, k);
  out.alphas = alphas.size();
  const double kd = static_cast<double>(k);
  const double budget = 1e-9 * std::max(1.0, std::abs(out.lhs)) /
                        static_cast<double>(std::max<std::size_t>(1, alphas.size()));
  double total = 0.0;
  for (u64 alpha : alphas) {
    const double a2 = static_cast<double>(alpha) * static_cast<double>(alpha);
    // the outer factor (X/2k)/alpha^2 scales the inner tail
    const double target = budget * 2.0 * kd * a2 / X;
    const DualSum inner = dual_sum_with(factors, k, X, alpha, window, target, m_cap);
    out.m_cap = std::max(out.m_cap, inner.m_cap);
    total += arith::mobius(alpha) / a2 * inner.total();
  }
  out.rhs = X / (2.0 * kd) * arith::jacobi(2, static_cast<i64>(k)) * total;
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
  return out;
}

// ---------------------------------------------------------------------
// D(Y) and the smoothed mean

DYEnumeration enumerate_DY(double Y, bool keep_members) {
  if (!(Y >= 1.0)) throw std::invalid_argument("enumerate_DY: need Y >= 1");
  const u64 lo = static_cast<u64>(std::ceil(Y));
  const u64 hi = static_cast<u64>(std::floor(2.0 * Y));
  DYEnumeration out;
  if (hi < lo) return out;
  std::vector<std::uint8_t> squarefree(hi - lo + 1, 1);
  for (u64 p : primes::primes_below(arith::isqrt(hi) + 1)) {
    const u64 sq = p * p;
    for (u64 m = (lo + sq - 1) / sq * sq; m <= hi; m += sq) squarefree[m - lo] = 0;
  }
  for (u64 d = lo; d <= hi; ++d) {
    if (d % 2 == 0 || !squarefree[d - lo]) continue;
    ++out.count;
    if (keep_members) out.members.push_back(d);
  }
  return out;
}

SmoothedMeanResult smoothed_mean(double x, double Y, const SmoothedMeanOptions& options) {
  if (!(x >= 3.0)) throw std::invalid_argument("smoothed_mean: need x >= 3");
  if (!(Y >= 16.0)) throw std::invalid_argument("smoothed_mean: need Y >= 16");
  SmoothedMeanResult r;
  r.x = x;
  r.Y = Y;
  r.U = options.U.value_or(std::pow(x, 0.125) * std::pow(Y, 0.25));
  const SmoothWindow window(r.U);
  r.z = options.z.value_or(std::sqrt(Y) / (r.U * std::pow(x, 0.25)));
  r.count_D = enumerate_DY(Y, false).count;
  const double nd = static_cast<double>(r.count_D);

  // odd a with Phi(a/Y) != 0, i.e. Y < a < 2Y
  const u64 a_hi = static_cast<u64>(std::ceil(2.0 * Y));
  const arith::SmallestFactorTable spf(a_hi);
  std::vector<u64> a_vals;
  std::vector<double> w_sf;
  std::vector<double> w_m;
  std::vector<double> w_r;
  for (u64 a = (static_cast<u64>(std::floor(Y)) + 1) | 1; a < a_hi; a += 2) {
    const double w = window(static_cast<double>(a) / Y);
    if (w == 0.0) continue;
    const MzRz split = mz_rz(a, r.z, spf);
    a_vals.push_back(a);
    w_sf.push_back(spf.mobius(a) != 0 ? w : 0.0);
    w_m.push_back(static_cast<double>(split.M) * w);
    w_r.push_back(static_cast<double>(split.R) * w);
  }

  const u64 X = static_cast<u64>(std::floor(x));
  const auto odd_primes = [&] {
    auto ps = primes::primes_below(X + 1);
    if (!ps.empty() && ps.front() == 2) ps.erase(ps.begin());
    return ps;
  }();

  double s1 = 0.0, s2 = 0.0, s21 = 0.0, s22 = 0.0, sd = 0.0;
  std::vector<int> legendre;
  std::vector<std::uint8_t> square_residue;
  for (u64 p : odd_primes) {
    legendre.assign(p, 0);
    for (u64 res = 1; res < p; ++res)
      legendre[res] = arith::jacobi(static_cast<i64>(res), static_cast<i64>(p));
    if (options.direct) {
      // residues b^2 mod p, the d = 2 power residues by definition
      square_residue.assign(p, 0);
      for (u64 b = 1; b < p; ++b) square_residue[(b * b) % p] = 1;
    }
    const int chi2 = arith::jacobi(2, static_cast<i64>(p));
    double p1 = 0.0, p2 = 0.0, p21 = 0.0, p22 = 0.0, pd = 0.0;
    for (std::size_t i = 0; i < a_vals.size(); ++i) {
      const u64 res = a_vals[i] % p;
      if (res == 0) continue;
      const double chi = static_cast<double>(chi2 * legendre[res]);
      p1 += w_sf[i];
      p2 += chi * w_sf[i];
      p21 += chi * w_m[i];
      p22 += chi * w_r[i];
      if (options.direct && square_residue[(8 * res) % p]) pd += w_sf[i];
    }
    s1 += p1;
    s2 += p2;
    s21 += p21;
    s22 += p22;
    sd += pd;
  }
  r.S1 = s1 / (2.0 * nd);
  r.S2 = s2 / (2.0 * nd);
  r.S21 = s21 / (2.0 * nd);
  r.S22 = s22 / (2.0 * nd);
  r.S = r.S1 + r.S2;
  r.S_direct = options.direct ? sd / nd : std::numeric_limits<double>::quiet_NaN();

  if (options.poisson_split) {
    r.poisson_split = true;
    for (u64 p : odd_primes) {
      const std::vector<arith::PrimePower> factors{{p, 1}};
      for (u64 alpha : admissible_alphas(r.z, p)) {
        const double a2 = static_cast<double>(alpha) * static_cast<double>(alpha);
        const double outer = Y / (4.0 * nd * static_cast<double>(p)) * arith::mobius(alpha) / a2;
        const double target = 1e-12 / std::abs(outer);
        const DualSum inner = dual_sum_with(factors, p, Y, alpha, window, target, std::nullopt);
        r.S_sq += outer * inner.square;
        r.S_nonsq += outer * (inner.nonsquare + inner.zero);
      }
    }
    r.S21_poisson = r.S_sq + r.S_nonsq;
  }

  r.main = static_cast<double>(primes::pi(X)) / 2.0;
  r.abs_error = std::abs(r.S - r.main);
  const double lx = std::log(x);
  r.envelope = std::log(lx) + (std::pow(x, 0.875) / std::pow(Y, 0.25) + x / std::sqrt(Y)) *
                                  std::log(x * Y);
  return r;
}

}  // namespace ntlab::gauss_poisson
