#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace elq {

using cd = std::complex<double>;

/// Global moduli and verification parameters shared by every module.
struct ModuliConfig {
  int n = 2;                       ///< rank
  cd tau{0.3, 1.1};                ///< modulus, Im(tau) > 0
  double gamma = 0.6180339887;     ///< anisotropy
  cd c{0.25, 0.1};                 ///< functor offset
  cd x{0.13, 0.07};                ///< functor base point
  double tol = 1e-8;               ///< residual pass threshold (max_rel)
  double series_tol = 1e-14;       ///< theta tail bound, relative to max(1, peak term)
  std::uint64_t seed = 42;
  int samples = 100;
  double pole_delta = 0.05;        ///< exclusion distance in the lattice-adapted norm
  /// Spectral points for multi-point checks (the intertwiner suite uses up to five).
  std::vector<cd> ws{{0.4, 0.3}, {-0.25, 0.15}, {0.1, -0.3}, {0.35, -0.2}, {-0.4, -0.1}};

  /// Test fixture: added to every beta coefficient of R^F. Zero in production runs.
  double beta_perturbation = 0.0;

  /// Throws config_error on invalid values.
  void validate() const;
};

}  // namespace elq
