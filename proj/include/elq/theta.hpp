#pragma once

// Theta functions with characteristics and the scalar/vector functions built from them.

#include <complex>

#include "elq/config.hpp"
#include "elq/linalg.hpp"

namespace elq {

struct ThetaCharacteristics {
  double kappa = 0.0;
  double kappa_prime = 0.0;
};

/// Largest symmetric truncation index the theta series may use.
inline constexpr int kThetaMaxTerms = 200;

/// theta_{k,k'}(t; tau) = sum_m exp(i pi (m+k)((m+k) tau + 2 (t + k'))).
///
/// The window |m| <= M is the smallest for which the Gaussian tail bound on both sides is
/// below series_tol * max(1, largest term). Throws domain_error for Im(tau) <= 0 and
/// convergence_error when M would exceed kThetaMaxTerms.
cd theta_char(ThetaCharacteristics chars, cd t, cd tau, double series_tol);

/// Truncation index theta_char would use (exposed for tests).
int theta_truncation(ThetaCharacteristics chars, cd t, cd tau, double series_tol);

/// Fixed-window evaluation, no adaptivity (test oracle and diagnostics).
cd theta_char_window(ThetaCharacteristics chars, cd t, cd tau, int window);

/// theta(t) = theta_{1/2,1/2}(t; tau): odd, simple zeros on Z + tau Z.
cd theta(cd t, const ModuliConfig& cfg);

/// Distance from p to offset + Z + tau Z in the lattice-adapted norm |a + b tau|.
double lattice_distance(cd p, cd offset, cd tau);

/// chi(z) = theta(z - (1 - 1/n) gamma) / theta(z). Throws pole_error near Z + tau Z.
cd chi(cd z, const ModuliConfig& cfg);

struct AlphaBeta {
  cd alpha;
  cd beta;
};

/// Coefficients of the dynamical R-matrix:
///   alpha(z,l) = theta(l - gamma) theta(z) / (theta(l) theta(z - gamma)),
///   beta(z,l)  = theta(z - l) theta(gamma) / (theta(l) theta(z - gamma)).
/// This alpha differs from the other common normalization theta(l + gamma)... by the
/// l-only gauge factor theta(l - gamma)/theta(l + gamma); it is the one compatible with the
/// intertwining matrix S(z, lambda) of vertex_irf.hpp. Throws pole_error when l is near
/// Z + tau Z or z near gamma + Z + tau Z.
AlphaBeta alpha_beta(cd z, cd l, const ModuliConfig& cfg);

/// Same, with alpha(z,l) = theta(l + gamma) theta(z) / (theta(l) theta(z - gamma)).
AlphaBeta alpha_beta_plus_gauge(cd z, cd l, const ModuliConfig& cfg);

/// Intertwining vector Phi(u), components phi_l(u) = theta_{l/n,0}(u; n tau), l = 0..n-1.
/// Phi(u+1) = A Phi(u) and Phi(u+tau) = exp(-i pi tau/n - 2 i pi u/n) B Phi(u).
Vector phi_vec(cd u, const ModuliConfig& cfg);

}  // namespace elq
