#include "elq/theta.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "elq/errors.hpp"

namespace elq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

// log |term| for shifted index u = m + kappa.
double log_term(double u, double y, double s) { return -kPi * y * u * u - 2.0 * kPi * u * s; }

// Bound on log(sum_{m > M} |term|) via the decreasing ratio of consecutive terms.
double upper_tail_log(int big_m, double kappa, double y, double s) {
  const double u = big_m + 1 + kappa;
  const double log_ratio = -kPi * y * (2.0 * u + 1.0) - 2.0 * kPi * s;
  if (log_ratio >= 0.0) return INFINITY;
  return log_term(u, y, s) - std::log1p(-std::exp(log_ratio));
}

double lower_tail_log(int big_m, double kappa, double y, double s) {
  const double u = -big_m - 1 + kappa;
  const double log_ratio = kPi * y * (2.0 * u - 1.0) + 2.0 * kPi * s;
  if (log_ratio >= 0.0) return INFINITY;
  return log_term(u, y, s) - std::log1p(-std::exp(log_ratio));
}

void check_tau(cd tau) {
  if (!(tau.imag() > 0.0)) throw domain_error("theta: Im(tau) must be positive");
}

}  // namespace

int theta_truncation(ThetaCharacteristics chars, cd t, cd tau, double series_tol) {
  check_tau(tau);
  if (!(series_tol > 0.0)) throw domain_error("theta: series_tol must be positive");
  const double y = tau.imag();
  const double s = t.imag();
  const double peak_log = std::max(0.0, kPi * s * s / y);
  const double budget = std::log(series_tol / 2.0) + peak_log;
  for (int big_m = 1; big_m <= kThetaMaxTerms; ++big_m) {
    if (upper_tail_log(big_m, chars.kappa, y, s) <= budget &&
        lower_tail_log(big_m, chars.kappa, y, s) <= budget)
      return big_m;
  }
  throw convergence_error("theta: truncation exceeds " + std::to_string(kThetaMaxTerms) +
                          " terms (|Im t| too large)");
}

cd theta_char_window(ThetaCharacteristics chars, cd t, cd tau, int window) {
  check_tau(tau);
  const cd shifted = 2.0 * (t + chars.kappa_prime);
  cd sum{};
  for (int m = -window; m <= window; ++m) {
    const double u = m + chars.kappa;
    sum += std::exp(kI * kPi * u * (u * tau + shifted));
  }
  return sum;
}

cd theta_char(ThetaCharacteristics chars, cd t, cd tau, double series_tol) {
  return theta_char_window(chars, t, tau, theta_truncation(chars, t, tau, series_tol));
}

cd theta(cd t, const ModuliConfig& cfg) {
  return theta_char({0.5, 0.5}, t, cfg.tau, cfg.series_tol);
}

double lattice_distance(cd p, cd offset, cd tau) {
  const cd d = p - offset;
  // d = a + b tau with real a, b.
  const double b = d.imag() / tau.imag();
  const double a = d.real() - b * tau.real();
  const double a0 = a - std::round(a);
  const double b0 = b - std::round(b);
  double best = INFINITY;
  for (int da = -1; da <= 1; ++da)
    for (int db = -1; db <= 1; ++db) best = std::min(best, std::abs(cd(a0 + da) + (b0 + db) * tau));
  return best;
}

cd chi(cd z, const ModuliConfig& cfg) {
  if (lattice_distance(z, 0.0, cfg.tau) < cfg.pole_delta)
    throw pole_error("chi: z is at a zero of theta");
  const double shift = (1.0 - 1.0 / cfg.n) * cfg.gamma;
  return theta(z - shift, cfg) / theta(z, cfg);
}

namespace {

AlphaBeta alpha_beta_impl(cd z, cd l, const ModuliConfig& cfg, double gauge_sign) {
  if (lattice_distance(l, 0.0, cfg.tau) < cfg.pole_delta)
    throw pole_error("alpha_beta: l is at a zero of theta");
  if (lattice_distance(z, cfg.gamma, cfg.tau) < cfg.pole_delta)
    throw pole_error("alpha_beta: z is at a pole (gamma + Z + tau Z)");
  const cd th_l = theta(l, cfg);
  const cd th_zg = theta(z - cfg.gamma, cfg);
  const cd denom = th_l * th_zg;
  return {theta(l + gauge_sign * cfg.gamma, cfg) * theta(z, cfg) / denom,
          theta(z - l, cfg) * theta(cd(cfg.gamma), cfg) / denom};
}

}  // namespace

AlphaBeta alpha_beta(cd z, cd l, const ModuliConfig& cfg) { return alpha_beta_impl(z, l, cfg, -1.0); }

AlphaBeta alpha_beta_plus_gauge(cd z, cd l, const ModuliConfig& cfg) {
  return alpha_beta_impl(z, l, cfg, 1.0);
}

Vector phi_vec(cd u, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const cd big_tau = static_cast<double>(n) * cfg.tau;
  Vector v(n);
  for (int l = 0; l < n; ++l)
    v(l) = theta_char({static_cast<double>(l) / n, 0.0}, u, big_tau, cfg.series_tol);
  return v;
}

}  // namespace elq
