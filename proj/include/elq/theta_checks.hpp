#pragma once

// Sampled identity checks for the theta functions and Phi.

#include "elq/config.hpp"
#include "elq/residual.hpp"

namespace elq {

/// theta_{k,k'}(t+1) = e^{2 i pi k} theta_{k,k'}(t), random characteristics in [0, 1).
ResidualReport verify_theta_monodromy_one(const ModuliConfig& cfg);
/// theta_{k,k'}(t+tau) = e^{-i pi tau - 2 i pi (t + k')} theta_{k,k'}(t).
ResidualReport verify_theta_monodromy_tau(const ModuliConfig& cfg);
/// theta_{k1+k2,k1'+k2'}(t) = e^{i pi k2^2 tau + 2 i pi k2 (t + k1' + k2')} theta_{k1,k1'}(t + k2 tau + k2').
ResidualReport verify_theta_char_shift(const ModuliConfig& cfg);
/// |theta(a + b tau)| for a, b in {-1, 0, 1}, absolute.
ResidualReport verify_theta_zeros(const ModuliConfig& cfg);
/// theta(-t) = -theta(t).
ResidualReport verify_theta_odd(const ModuliConfig& cfg);
/// Phi(u+1) = A Phi(u), Phi(u+tau) = e^{-i pi tau/n - 2 i pi u/n} B Phi(u).
ResidualReport verify_phi_monodromy(const ModuliConfig& cfg);

}  // namespace elq
