#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "elq/errors.hpp"
#include "elq/linalg.hpp"
#include "elq/theta.hpp"

using namespace elq;

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI{0.0, 1.0};

// Wide fixed window: the oracle for every adaptive evaluation below.
cd wide(ThetaCharacteristics ch, cd t, cd tau) { return theta_char_window(ch, t, tau, 80); }

ModuliConfig cfg_n(int n) {
  ModuliConfig c;
  c.n = n;
  return c;
}

}  // namespace

TEST(Theta, HalfCharacteristicVanishesAtOrigin) {
  const ModuliConfig cfg;
  EXPECT_LT(std::abs(theta_char({0.5, 0.5}, 0.0, cfg.tau, cfg.series_tol)), 1e-14);
  EXPECT_LT(std::abs(theta(0.0, cfg)), 1e-14);
}

TEST(Theta, LatticeZeros) {
  const ModuliConfig cfg;
  for (int a = -2; a <= 2; ++a)
    for (int b = -1; b <= 1; ++b) EXPECT_LT(std::abs(theta(cd(a) + double(b) * cfg.tau, cfg)), 1e-9);
}

TEST(Theta, AgreesWithWideWindow) {
  const ModuliConfig cfg;
  const cd t{0.37, 0.21};
  for (ThetaCharacteristics ch : {ThetaCharacteristics{0.5, 0.5}, {0.0, 0.0}, {0.3, -0.7}}) {
    const cd adaptive = theta_char(ch, t, cfg.tau, cfg.series_tol);
    EXPECT_LT(std::abs(adaptive - wide(ch, t, cfg.tau)), 1e-13);
    const int m = theta_truncation(ch, t, cfg.tau, cfg.series_tol);
    EXPECT_LT(std::abs(theta_char_window(ch, t, cfg.tau, m) - theta_char_window(ch, t, cfg.tau, m + 10)), 1e-12);
  }
}

TEST(Theta, Odd) {
  const ModuliConfig cfg;
  const cd t{0.2, 0.3};
  EXPECT_LT(std::abs(theta(-t, cfg) + theta(t, cfg)), 1e-13);
  EXPECT_LT(std::abs(wide({0.5, 0.5}, -t, cfg.tau) + wide({0.5, 0.5}, t, cfg.tau)), 1e-13);
}

TEST(Theta, Monodromy) {
  const ModuliConfig cfg;
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const ThetaCharacteristics ch{u(eng), u(eng)};
    const cd t{u(eng), 0.5 * u(eng)};
    const cd base = theta_char(ch, t, cfg.tau, cfg.series_tol);
    const cd one = theta_char(ch, t + 1.0, cfg.tau, cfg.series_tol);
    EXPECT_LT(std::abs(one - std::exp(2.0 * kI * kPi * ch.kappa) * base), 1e-12 * (1 + std::abs(base)));
    const cd shifted = theta_char(ch, t + cfg.tau, cfg.tau, cfg.series_tol);
    const cd factor = std::exp(-kI * kPi * cfg.tau - 2.0 * kI * kPi * (t + ch.kappa_prime));
    EXPECT_LT(std::abs(shifted - factor * base), 1e-11 * (1 + std::abs(factor * base)));
  }
}

TEST(Theta, CharacteristicShift) {
  const ModuliConfig cfg;
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 20; ++k) {
    const double k1 = u(eng), k2 = u(eng), kp1 = u(eng), kp2 = u(eng);
    const cd t{u(eng), u(eng)};
    const cd lhs = theta_char({k1 + k2, kp1 + kp2}, t, cfg.tau, cfg.series_tol);
    const cd rhs = std::exp(kI * kPi * k2 * k2 * cfg.tau + 2.0 * kI * kPi * k2 * (t + kp1 + kp2)) *
                   theta_char({k1, kp1}, t + k2 * cfg.tau + kp2, cfg.tau, cfg.series_tol);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST(Theta, Errors) {
  EXPECT_THROW(theta_char({0.5, 0.5}, 0.0, cd(0.3, 0.0), 1e-14), domain_error);
  EXPECT_THROW(theta_char({0.5, 0.5}, 0.0, cd(0.3, -1.0), 1e-14), domain_error);
  EXPECT_THROW(theta_char({0.5, 0.5}, cd(0.0, 400.0), cd(0.3, 1.1), 1e-14), convergence_error);
}

TEST(Chi, ZeroPeriodicityAndPole) {
  for (int n : {2, 3}) {
    const ModuliConfig cfg = cfg_n(n);
    EXPECT_LT(std::abs(chi((1.0 - 1.0 / n) * cfg.gamma, cfg)), 1e-13);
    const cd z{0.4, 0.2};
    EXPECT_LT(std::abs(chi(z + double(n), cfg) - chi(z, cfg)), 1e-12);
    EXPECT_THROW(chi(0.0, cfg), pole_error);
    EXPECT_THROW(chi(cd(1e-3, 0.0), cfg), pole_error);
  }
}

TEST(AlphaBeta, SpecialValues) {
  const ModuliConfig cfg;
  const cd l{0.3, 0.1};
  const auto ab = alpha_beta(0.0, l, cfg);
  EXPECT_LT(std::abs(ab.alpha), 1e-13);
  EXPECT_LT(std::abs(ab.beta - 1.0), 1e-12);
  // oracle for beta(0, l) = 1: oddness of the wide-window series
  const cd odd = wide({0.5, 0.5}, -l, cfg.tau) * wide({0.5, 0.5}, cfg.gamma, cfg.tau) /
                 (wide({0.5, 0.5}, l, cfg.tau) * wide({0.5, 0.5}, -cfg.gamma, cfg.tau));
  EXPECT_LT(std::abs(odd - 1.0), 1e-12);
}

TEST(AlphaBeta, MonodromyTable) {
  const ModuliConfig cfg;
  const cd z{0.41, 0.23}, l{0.3, 0.1};
  for (auto fn : {&alpha_beta, &alpha_beta_plus_gauge}) {
    const auto base = fn(z, l, cfg);
    const auto one = fn(z + 1.0, l, cfg);
    const auto tau = fn(z + cfg.tau, l, cfg);
    EXPECT_LT(std::abs(one.alpha - base.alpha), 1e-12);
    EXPECT_LT(std::abs(one.beta - base.beta), 1e-12);
    EXPECT_LT(std::abs(tau.alpha - std::exp(-2.0 * kI * kPi * cfg.gamma) * base.alpha), 1e-12);
    EXPECT_LT(std::abs(tau.beta - std::exp(-2.0 * kI * kPi * (cfg.gamma - l)) * base.beta), 1e-12);
  }
}

TEST(AlphaBeta, PoleErrors) {
  const ModuliConfig cfg;
  EXPECT_THROW(alpha_beta(0.3, 0.0, cfg), pole_error);
  EXPECT_THROW(alpha_beta(cfg.gamma, 0.3, cfg), pole_error);
}

TEST(PhiVec, Monodromy) {
  for (int n : {2, 3, 4}) {
    const ModuliConfig cfg = cfg_n(n);
    const auto [A, B] = heisenberg_A_B(n);
    const cd u{0.31, 0.17};
    const Vector p = phi_vec(u, cfg);
    EXPECT_LT((phi_vec(u + 1.0, cfg) - A * p).cwiseAbs().maxCoeff(), 1e-12);
    const cd f = std::exp(-kI * kPi * cfg.tau / double(n) - 2.0 * kI * kPi * u / double(n));
    EXPECT_LT((phi_vec(u + cfg.tau, cfg) - f * B * p).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PhiVec, GenericComponentsNonzero) {
  const ModuliConfig cfg;
  const Vector p = phi_vec(cd(0.31, 0.17), cfg);
  ASSERT_EQ(p.size(), 2);
  for (Index i = 0; i < p.size(); ++i) EXPECT_GT(std::abs(p(i)), 1e-3);
}
