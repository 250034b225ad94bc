#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ntlab/arith.hpp"
#include "ntlab/gauss_poisson.hpp"
#include "oracles.hpp"

using namespace ntlab::gauss_poisson;

TEST_CASE("tau against long double summation") {
  for (u64 k = 1; k < 100; k += 2)
    for (i64 m = -20; m <= 20; ++m) {
      const auto ref = oracle::gauss_tau(k, m);
      const auto got = tau_m(k, m);
      REQUIRE(std::abs(got.real() - static_cast<double>(ref.real())) < 1e-9);
      REQUIRE(std::abs(got.imag() - static_cast<double>(ref.imag())) < 1e-9);
    }
  CHECK_THROWS_AS(tau_m(4, 1), std::invalid_argument);
}

TEST_CASE("G table entries") {
  const double r3 = std::sqrt(3.0);
  CHECK(G_formula(9, 0).real() == doctest::Approx(6));  // phi(9)
  CHECK(G_formula(9, 3).real() == doctest::Approx(-3));
  CHECK(G_formula(3, 1).real() == doctest::Approx(r3));
  CHECK(G_formula(3, 2).real() == doctest::Approx(-r3));
  CHECK(G_formula(3, 0).real() == 0.0);
  CHECK(G_formula(27, 9).real() == doctest::Approx(9 * r3));  // b = a + 1 odd: p^a sqrt(p)
  CHECK(G_direct(27, 9).real() == doctest::Approx(9 * r3));
  CHECK(G_formula(27, 1).real() == 0.0);
  CHECK(G_formula(1, 17).real() == 1.0);
  for (u64 k : {3u, 9u, 15u, 45u, 105u, 343u, 675u})
    for (i64 m = -40; m <= 40; ++m) {
      const auto direct = G_direct(k, m);
      REQUIRE(std::abs(direct - G_formula(k, m)) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("G symmetry and multiplicativity") {
  for (u64 k = 1; k < 200; k += 2) {
    const int s = ntlab::arith::jacobi(-1, static_cast<i64>(k));
    const GaussSums g(k);
    for (i64 m = 1; m <= 30; ++m) REQUIRE(std::abs(g.G(-m) - static_cast<double>(s) * g.G(m)) < 1e-9);
  }
  for (u64 a = 1; a < 40; a += 2)
    for (u64 b = 1; b < 40; b += 2) {
      if (std::gcd(a, b) != 1) continue;
      for (i64 m = -10; m <= 10; ++m)
        REQUIRE(std::abs(G_direct(a * b, m) - G_direct(a, m) * G_direct(b, m)) < 1e-8);
    }
}

TEST_CASE("ramp") {
  CHECK(ramp(-1.0) == 0.0);
  CHECK(ramp(0.0) == 0.0);
  CHECK(ramp(1.0) == 1.0);
  CHECK(ramp(0.5) == doctest::Approx(0.5));
  for (double u = 0.01; u < 1; u += 0.01) {
    REQUIRE(ramp(u) + ramp(1 - u) == doctest::Approx(1.0));
    REQUIRE(ramp(u) == doctest::Approx(oracle::ramp(u)));
    REQUIRE(ramp(u + 0.005) >= ramp(u));
  }
}

TEST_CASE("window shape") {
  CHECK_THROWS_AS(SmoothWindow(3.9), std::invalid_argument);
  for (double U : {4.0, 8.0, 32.0, 100.0}) {
    const SmoothWindow w(U);
    CHECK(w(1.0) == 0.0);
    CHECK(w(2.0) == 0.0);
    CHECK(w(0.5) == 0.0);
    CHECK(w(2.5) == 0.0);
    for (double t = 1 + 1 / U; t <= 2 - 1 / U; t += 0.01) REQUIRE(w(t) == 1.0);
    for (double t = 1.0; t <= 2.0; t += 1e-3) {
      REQUIRE(w(t) >= 0.0);
      REQUIRE(w(t) <= 1.0);
      REQUIRE(w(t) == doctest::Approx(w(3.0 - t)));
    }
  }
}

TEST_CASE("window derivatives") {
  const SmoothWindow w(8);
  // jets against central differences
  for (double t = 1.01; t < 1.2; t += 0.013) {
    const double h = 1e-5;
    const double fd1 = (w(t + h) - w(t - h)) / (2 * h);
    const double fd2 = (w(t + h) - 2 * w(t) + w(t - h)) / (h * h);
    REQUIRE(w.derivative(1, t) == doctest::Approx(fd1).epsilon(1e-5));
    REQUIRE(w.derivative(2, t) == doctest::Approx(fd2).epsilon(1e-3));
    REQUIRE(w.jet(t).value() == doctest::Approx(w(t)));
  }
  const auto& C = w.derivative_bounds();
  CHECK(C[0] == doctest::Approx(1.05));
  for (double U : {8.0, 32.0}) {
    const SmoothWindow ww(U);
    for (double t = 1.0; t <= 2.0; t += 1e-4)
      for (std::size_t j = 0; j <= SmoothWindow::kMaxDerivative; ++j)
        REQUIRE(std::abs(ww.derivative(j, t)) <= C[j] * std::pow(U, static_cast<double>(j)));
  }
  CHECK_THROWS_AS(w.derivative(11, 1.5), std::invalid_argument);
}

TEST_CASE("L1 norms of the derivatives") {
  const SmoothWindow w(8);
  for (std::size_t j = 1; j <= 6; ++j) {
    // midpoint rule on the two edges
    const int n = 200000;
    double s = 0;
    for (int i = 0; i < n; ++i) {
      const double t = 1 + (i + 0.5) / n / 8.0;
      s += std::abs(w.derivative(j, t)) / n / 8.0;
    }
    s *= 2;
    REQUIRE(w.derivative_l1(j) >= s);
    REQUIRE(w.derivative_l1(j) <= 1.06 * s);
  }
  CHECK(w.derivative_l1(1) == doctest::Approx(2.1).epsilon(1e-3));  // total variation 2
}

TEST_CASE("transform against the oracle") {
  for (double U : {8.0, 32.0}) {
    const SmoothWindow w(U);
    const TildeEvaluator fast(w, 40);
    CHECK(tilde_transform(w, 0) == doctest::Approx(oracle::tilde(U, 0)).epsilon(1e-10));
    for (double xi : {0.1, 0.5, 1.0, 2.75, 7.3, 19.9, 55.5, -3.3, -41.0}) {
      const double ref = oracle::tilde(U, xi);
      REQUIRE(std::abs(tilde_transform(w, xi) - ref) < 1e-11);
      REQUIRE(std::abs(fast(xi) - ref) < 1e-11);
      const auto [plus, minus] = fast.pair(xi);
      REQUIRE(std::abs(minus - oracle::tilde(U, -xi)) < 1e-11);
      REQUIRE(plus == fast(xi));
    }
  }
}

TEST_CASE("transform decay bound") {
  const SmoothWindow w(8);
  for (double xi = 1.0; xi < 300; xi *= 1.37) {
    const double v = std::abs(tilde_transform(w, xi));
    for (std::size_t j = 1; j <= 6; ++j)
      REQUIRE(v <= std::sqrt(2.0) * w.derivative_l1(j) / std::pow(2 * std::numbers::pi * xi, j) + 1e-14);
  }
}

TEST_CASE("certified cutoff") {
  const SmoothWindow w(8);
  const double c = 0.37;
  const double target = 1e-6;
  const u64 M = certified_m_cap(w, c, 1.0, target);
  const TildeEvaluator fast(w, 5 * M * c / 8 + 1);
  double tail = 0;
  for (u64 m = M + 1; m < 5 * M; ++m) tail += std::abs(fast(m * c)) + std::abs(fast(-(m * c)));
  CHECK(tail <= target);
  CHECK(certified_m_cap(w, c, 1.0, 1e-9) >= M);
  CHECK(certified_m_cap(w, c, 10.0, target) >= M);
  CHECK_THROWS_AS(certified_m_cap(w, 0.0, 1.0, target), std::invalid_argument);
}

TEST_CASE("M_z + R_z = mu^2") {
  CHECK(mz_rz(12, 1).M == 1);
  CHECK(mz_rz(12, 1).R == -1);
  CHECK(mz_rz(36, 2.5).M == 0);   // l in {1, 2} below z, {3, 6} above
  CHECK(mz_rz(36, 2.5).R == 0);
  CHECK(mz_rz(7, 0.5).M == 0);    // l = 1 already exceeds z
  CHECK(mz_rz(7, 0.5).R == 1);
  const ntlab::arith::SmallestFactorTable spf(20000);
  for (double z : {0.5, 1.0, 3.0, 10.0, 150.0})
    for (u64 a = 1; a <= 20000; ++a) {
      const auto s = mz_rz(a, z, spf);
      REQUIRE(s.M + s.R == oracle::mobius(a) * oracle::mobius(a));
      REQUIRE(s.M == M_z(a, z));
    }
  CHECK_THROWS_AS(mz_rz(0, 1), std::invalid_argument);
}

TEST_CASE("Poisson identity at a few points") {
  for (u64 k : {1u, 7u, 9u, 35u})
    for (double z : {1.0, 4.0}) {
      const SmoothWindow w(12);
      const auto r = poisson_identity_check(k, 700, z, w);
      REQUIRE(r.rel_err <= 1e-6);
    }
  const SmoothWindow w(8);
  CHECK_THROWS_AS(poisson_identity_check(4, 100, 1, w), std::invalid_argument);
  CHECK_THROWS_AS(dual_sum(5, 1000, 1, w, 1e-9, u64{1}), std::invalid_argument);
  const auto d = dual_sum(5, 1000, 1, w, 1e-9);
  CHECK(d.m_cap >= 1);
  CHECK(d.total() == doctest::Approx(d.zero + d.square + d.nonsquare));
}

TEST_CASE("D(Y)") {
  const auto e = enumerate_DY(1000);
  u64 n = 0;
  for (u64 d = 1000; d <= 2000; ++d)
    if (d % 2 == 1 && oracle::mobius(d) != 0) ++n;
  CHECK(e.count == n);
  CHECK(e.members.size() == n);
  for (u64 d : e.members) REQUIRE((d % 2 == 1 && oracle::mobius(d) != 0));
  CHECK(enumerate_DY(1000, false).members.empty());
  CHECK(std::abs(static_cast<double>(enumerate_DY(1e5, false).count) / 1e5 - 4 / (std::numbers::pi * std::numbers::pi)) < 0.01);
}

TEST_CASE("smoothed mean splits") {
  const auto r = smoothed_mean(500, 64);
  CHECK(r.S == doctest::Approx(r.S_direct).epsilon(1e-12));
  CHECK(r.S2 == doctest::Approx(r.S21 + r.S22).epsilon(1e-12));
  CHECK(r.U == doctest::Approx(std::pow(500.0, 0.125) * std::pow(64.0, 0.25)));
  CHECK(r.main == 47.5);

  SmoothedMeanOptions opt;
  opt.z = 3;
  opt.poisson_split = true;
  const auto p = smoothed_mean(100, 64, opt);
  CHECK(p.poisson_split);
  CHECK(p.S21_poisson == doctest::Approx(p.S21).epsilon(1e-8));
  CHECK(p.S21_poisson == doctest::Approx(p.S_sq + p.S_nonsq));

  CHECK_THROWS_AS(smoothed_mean(2, 64), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_mean(500, 8), std::invalid_argument);
  SmoothedMeanOptions lowU;
  lowU.U = 2;
  CHECK_THROWS_AS(smoothed_mean(500, 64, lowU), std::invalid_argument);
}
