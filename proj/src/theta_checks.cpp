#include "elq/theta_checks.hpp"

#include <numbers>
#include <random>

#include "elq/sampling.hpp"
#include "elq/theta.hpp"

namespace elq {

namespace {

const cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

ThetaCharacteristics random_chars(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double k = u(eng);
  return {k, u(eng)};
}

SampleConstraints plain() {
  SampleConstraints sc;
  sc.with_lambda = false;
  return sc;
}

}  // namespace

ResidualReport verify_theta_monodromy_one(const ModuliConfig& cfg) {
  const std::string name = "theta.monodromy_one";
  ResidualAccumulator acc(name, "theta_{k,k'}(t+1) = e^{2 i pi k} theta_{k,k'}(t)", cfg.tol);
  const auto stream = stream_for(name);
  const auto pts = sample_points(cfg, plain(), stream);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto eng = sample_engine(cfg.seed, stream + 1, i);
    const auto ch = random_chars(eng);
    const cd t = pts[i].z;
    acc.add(pts[i], theta_char(ch, t + 1.0, cfg.tau, cfg.series_tol),
            std::exp(2.0 * kI * kPi * ch.kappa) * theta_char(ch, t, cfg.tau, cfg.series_tol));
  }
  return acc.finish();
}

ResidualReport verify_theta_monodromy_tau(const ModuliConfig& cfg) {
  const std::string name = "theta.monodromy_tau";
  ResidualAccumulator acc(name, "theta_{k,k'}(t+tau) = e^{-i pi tau - 2 i pi (t+k')} theta_{k,k'}(t)", cfg.tol);
  const auto stream = stream_for(name);
  const auto pts = sample_points(cfg, plain(), stream);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto eng = sample_engine(cfg.seed, stream + 1, i);
    const auto ch = random_chars(eng);
    const cd t = pts[i].z;
    acc.add(pts[i], theta_char(ch, t + cfg.tau, cfg.tau, cfg.series_tol),
            std::exp(-kI * kPi * cfg.tau - 2.0 * kI * kPi * (t + ch.kappa_prime)) *
                theta_char(ch, t, cfg.tau, cfg.series_tol));
  }
  return acc.finish();
}

ResidualReport verify_theta_char_shift(const ModuliConfig& cfg) {
  const std::string name = "theta.char_shift";
  ResidualAccumulator acc(name, "theta_{k1+k2,k1'+k2'}(t) = e^{i pi k2^2 tau + 2 i pi k2 (t+k1'+k2')} theta_{k1,k1'}(t+k2 tau+k2')",
                          cfg.tol);
  const auto stream = stream_for(name);
  const auto pts = sample_points(cfg, plain(), stream);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto eng = sample_engine(cfg.seed, stream + 1, i);
    const auto a = random_chars(eng);
    const auto b = random_chars(eng);
    const cd t = pts[i].z;
    const ThetaCharacteristics sum{a.kappa + b.kappa, a.kappa_prime + b.kappa_prime};
    const cd pref = std::exp(kI * kPi * b.kappa * b.kappa * cfg.tau +
                             2.0 * kI * kPi * b.kappa * (t + a.kappa_prime + b.kappa_prime));
    acc.add(pts[i], theta_char(sum, t, cfg.tau, cfg.series_tol),
            pref * theta_char(a, t + b.kappa * cfg.tau + b.kappa_prime, cfg.tau, cfg.series_tol));
  }
  return acc.finish();
}

ResidualReport verify_theta_zeros(const ModuliConfig& cfg) {
  const std::string name = "theta.zeros";
  ResidualAccumulator acc(name, "theta(a + b tau) = 0", cfg.tol);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      SamplePoint p;
      p.z = static_cast<double>(a) + static_cast<double>(b) * cfg.tau;
      acc.add_error(p, std::abs(theta(p.z, cfg)), 0.0);
    }
  return acc.finish();
}

ResidualReport verify_theta_odd(const ModuliConfig& cfg) {
  const std::string name = "theta.odd";
  ResidualAccumulator acc(name, "theta(-t) = -theta(t)", cfg.tol);
  for (const auto& p : sample_points(cfg, plain(), stream_for(name))) acc.add(p, theta(-p.z, cfg), -theta(p.z, cfg));
  return acc.finish();
}

ResidualReport verify_phi_monodromy(const ModuliConfig& cfg) {
  const std::string name = "theta.phi_monodromy";
  ResidualAccumulator acc(name, "Phi(u+1) = A Phi(u), Phi(u+tau) = e^{-i pi tau/n - 2 i pi u/n} B Phi(u)", cfg.tol);
  const auto [A, B] = heisenberg_A_B(cfg.n);
  const double n = cfg.n;
  for (const auto& p : sample_points(cfg, plain(), stream_for(name))) {
    const Vector phi = phi_vec(p.z, cfg);
    acc.add(p, Matrix(phi_vec(p.z + 1.0, cfg)), Matrix(A * phi));
    acc.add(p, Matrix(phi_vec(p.z + cfg.tau, cfg)),
            Matrix(std::exp(-kI * kPi * cfg.tau / n - 2.0 * kI * kPi * p.z / n) * (B * phi)));
  }
  return acc.finish();
}

}  // namespace elq
