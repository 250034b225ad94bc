#pragma once

// Gauss-type sums of the quadratic symbol, the smooth plateau window and
// its cos+sin transform, the M_z / R_z split of mu^2, the Poisson
// summation identity for smoothed character sums over odd integers, and
// the smoothed mean value of P_{(8a,2)}(x) over odd squarefree a ~ Y.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ntlab/arith.hpp"
#include "ntlab/jet.hpp"

namespace ntlab::gauss_poisson {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// ---------------------------------------------------------------------
// Gauss-type sums

/// tau_m(k) = sum_{a mod k} (a/k) e(am/k), direct summation. k odd >= 1.
std::complex<double> tau_m(u64 k, i64 m);

/// Precomputes the Jacobi symbols and unit roots of one odd modulus so
/// that many tau_m(k) / G_m(k) evaluations share the O(k) setup.
class GaussSums {
 public:
  explicit GaussSums(u64 k);
  u64 modulus() const { return k_; }
  std::complex<double> tau(i64 m) const;
  /// tau_m(k) / ((1+i)/2 + (-1/k)(1-i)/2).
  std::complex<double> G(i64 m) const;

 private:
  u64 k_;
  std::vector<int> symbol_;
  std::vector<std::complex<double>> roots_;  // e(r/k)
};

/// G_m(k) from its definition through tau_m(k).
std::complex<double> G_direct(u64 k, i64 m);
/// G_m(k) from multiplicativity and the prime-power evaluation table.
std::complex<double> G_formula(u64 k, i64 m);
/// Real value of G_m(k) given the factorization of k.
double G_formula(const std::vector<arith::PrimePower>& factors, i64 m);

// ---------------------------------------------------------------------
// Smooth window

/// The mollifier ramp r(u) = s(u) / (s(u) + s(1-u)), s(u) = exp(-1/u) on
/// u > 0, as a jet (value plus derivatives) in u.
template <std::size_t N>
Jet<N> ramp(const Jet<N>& u) {
  const double u0 = u.c[0];
  if (u0 <= 0.0) return Jet<N>{};
  if (u0 >= 1.0) return Jet<N>::constant(1.0);
  // exp(-1/v) underflows to 0 together with all its derivatives below v ~ 1/700
  auto s = [](const Jet<N>& v) {
    if (v.c[0] < 2e-3) return Jet<N>{};
    return exp(-(Jet<N>::constant(1.0) / v));
  };
  const Jet<N> left = s(u);
  const Jet<N> right = s(Jet<N>::constant(1.0) - u);
  return left / (left + right);
}

double ramp(double u);

/// Phi(t) = r(U(t-1)) r(U(2-t)): smooth, supported on [1,2], identically
/// 1 on [1+1/U, 2-1/U] and symmetric about t = 3/2.
class SmoothWindow {
 public:
  static constexpr std::size_t kMaxDerivative = 4;   // bounded derivatives
  static constexpr std::size_t kJetOrder = 10;       // used for tail bounds

  /// Throws std::invalid_argument for U < 4.
  explicit SmoothWindow(double U);

  double U() const { return U_; }
  double operator()(double t) const;
  /// Phi^{(j)}(t) for j <= kJetOrder.
  double derivative(std::size_t j, double t) const;
  Jet<kJetOrder> jet(double t) const;

  /// C_j with |Phi^{(j)}(t)| <= C_j U^j for all t, j <= kMaxDerivative.
  /// Equal to max_u |r^{(j)}(u)| (with a 5% margin), independent of U.
  const std::array<double, kMaxDerivative + 1>& derivative_bounds() const;

  /// ||Phi^{(j)}||_1 = 2 U^{j-1} int_0^1 |r^{(j)}|, j <= kJetOrder
  /// (with a 5% margin on the integral).
  double derivative_l1(std::size_t j) const;

 private:
  double U_;
};

/// ~Phi(xi) = int (cos 2 pi xi x + sin 2 pi xi x) Phi(x) dx by adaptive
/// Simpson on the two edges plus the plateau in closed form.
double tilde_transform(const SmoothWindow& window, double xi);

/// Bulk evaluator of ~Phi for |xi| <= U * nu_max. Uses the symmetry of
/// Phi about 3/2 to reduce ~Phi to one edge integral of the ramp against
/// cos/sin of frequency xi/U, on a fixed composite Gauss-Legendre grid
/// sized for nu_max oscillations.
class TildeEvaluator {
 public:
  TildeEvaluator(const SmoothWindow& window, double nu_max);
  double operator()(double xi) const;
  /// (~Phi(xi), ~Phi(-xi)).
  std::pair<double, double> pair(double xi) const;
  double nu_max() const { return nu_max_; }

 private:
  /// F(xi) = int Phi(x) cos(2 pi xi (x - 3/2)) dx.
  double centered_cosine(double xi) const;

  const SmoothWindow* window_;
  double nu_max_;
  std::size_t panels_;
  std::vector<double> offsets_;         // GL nodes scaled to half a panel
  std::vector<double> weighted_ramp_;  // panels_ * nodes
};

/// Smallest M with sum_{|m| > M} weight * |~Phi(m c)| <= target, from
/// |~Phi(xi)| <= sqrt(2) ||Phi^{(j)}||_1 / (2 pi |xi|)^j minimized over
/// 2 <= j <= kJetOrder.
u64 certified_m_cap(const SmoothWindow& window, double c, double weight, double target);

// ---------------------------------------------------------------------
// mu^2 = M_z + R_z

struct MzRz {
  i64 M = 0;  // sum_{l^2 | a, l <= z} mu(l)
  i64 R = 0;  // sum_{l^2 | a, l > z} mu(l)
};

MzRz mz_rz(u64 a, double z);
MzRz mz_rz(u64 a, double z, const arith::SmallestFactorTable& spf);
inline i64 M_z(u64 a, double z) { return mz_rz(a, z).M; }
inline i64 R_z(u64 a, double z) { return mz_rz(a, z).R; }

// ---------------------------------------------------------------------
// Poisson summation over odd d

/// sum over m of (-1)^m G_m(k) ~Phi(m X / (2 alpha^2 k)), split by m.
struct DualSum {
  double zero = 0.0;       // m = 0
  double square = 0.0;     // m = n^2, n >= 1
  double nonsquare = 0.0;  // every other m != 0
  u64 m_cap = 0;
  double total() const { return zero + square + nonsquare; }
};

/// `m_cap` defaults to the certified value for `target`; an explicit
/// m_cap below it throws std::invalid_argument.
DualSum dual_sum(u64 k, double X, u64 alpha, const SmoothWindow& window, double target,
                 std::optional<u64> m_cap = std::nullopt);

struct PoissonCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;  // |lhs - rhs| / max(1, |lhs|)
  u64 m_cap = 0;         // largest m range used over alpha
  std::size_t alphas = 0;
};

/// lhs = sum_{(d,2)=1} M_z(d) (d/k) Phi(d/X);
/// rhs = (X/2k)(2/k) sum_{alpha <= z, (alpha,2k)=1} mu(alpha)/alpha^2
///         sum_m (-1)^m G_m(k) ~Phi(m X / (2 alpha^2 k)).
PoissonCheck poisson_identity_check(u64 k, double X, double z, const SmoothWindow& window,
                                    std::optional<u64> m_cap = std::nullopt);

// ---------------------------------------------------------------------
// D(Y) and the smoothed mean value

struct DYEnumeration {
  std::vector<u64> members;
  u64 count = 0;
};

/// {d : Y <= d <= 2Y, d odd and squarefree}.
DYEnumeration enumerate_DY(double Y, bool keep_members = true);

struct SmoothedMeanOptions {
  std::optional<double> U;  // default x^{1/8} Y^{1/4}
  std::optional<double> z;  // default Y^{1/2} / (U x^{1/4})
  bool direct = true;         // also evaluate S straight from P_{(8a,2)}(x)
  bool poisson_split = false; // evaluate S_{2,1} through the dual sums
};

struct SmoothedMeanResult {
  double x = 0.0;
  double Y = 0.0;
  double U = 0.0;
  double z = 0.0;
  u64 count_D = 0;

  double S = 0.0;         // S1 + S2
  double S_direct = 0.0;  // (1/#D) sum mu^2(a) P_{(8a,2)}(x) Phi(a/Y); NaN if skipped
  double S1 = 0.0;
  double S2 = 0.0;
  double S21 = 0.0;
  double S22 = 0.0;
  bool poisson_split = false;
  double S21_poisson = 0.0;  // S_sq + S_nonsq
  double S_sq = 0.0;
  double S_nonsq = 0.0;

  double main = 0.0;       // pi(x)/2
  double abs_error = 0.0;  // |S - pi(x)/2|
  double envelope = 0.0;   // log log x + (x^{7/8}/Y^{1/4} + x/Y^{1/2}) log(xY)
};

/// Throws std::invalid_argument for x < 3, Y < 16, or U < 4.
SmoothedMeanResult smoothed_mean(double x, double Y, const SmoothedMeanOptions& options = {});

}  // namespace ntlab::gauss_poisson
