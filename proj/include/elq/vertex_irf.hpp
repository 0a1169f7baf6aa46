#pragma once

// Intertwining matrix S(z, lambda) and the vertex-face relations between R^B and R^F.

#include <functional>

#include "elq/config.hpp"
#include "elq/linalg.hpp"
#include "elq/residual.hpp"
#include "elq/theta.hpp"
#include "elq/weights.hpp"

namespace elq {

/// Column j is phi_vec(z - n lambda_j).
Matrix build_S(cd z, const WeightVector& lambda, const ModuliConfig& cfg);

/// S_u(z, lambda) = S(z - u, lambda).
struct SMatrixEvaluator {
  cd base_point{0.0, 0.0};
  Matrix operator()(cd z, const WeightVector& lambda, const ModuliConfig& cfg) const {
    return build_S(z - base_point, lambda, cfg);
  }
};

/// Characteristics of the level-one theta function det S is proportional to:
/// (1/2, 1/2) for even n, (0, 0) for odd n (det S(z+1) = (-1)^{n-1} det S(z)).
ThetaCharacteristics det_S_characteristics(int n);

/// det S(z, lambda) / theta_{det_S_characteristics(n)}(z; tau). For even n this is det S / theta(z).
cd det_ratio(cd z, const WeightVector& lambda, const ModuliConfig& cfg);

/// z-independence of det_ratio at fixed lambda (10 z values per lambda sample).
ResidualReport verify_det_ratio(const ModuliConfig& cfg);

using RFFunction = std::function<Matrix(cd, const WeightVector&)>;

/// relation 1: R^B(z-w) S1(z,l) S2(w,l-g h1) = S2(w,l) S1(z,l-g h2) R^F(z-w,l)
/// relation 2: R^B(z-w) S2(w,l) S1(z,l+g h2) = S1(z,l) S2(w,l+g h1) R^F(z-w,l)
/// relation 0 checks both. R^B is built at a reference lambda drawn from a stream the
/// samples never use.
ResidualReport verify_vertex_irf(const ModuliConfig& cfg, int relation = 0);

/// Same with R^F replaced by `rf` (negative controls).
ResidualReport verify_vertex_irf_with(const ModuliConfig& cfg, int relation, const RFFunction& rf,
                                      const std::string& name);

/// Componentwise form, with Phi_j(z, l) = Phi(z - n l_j):
///   i = j:  R^B(z-w) Phi_i(z,l) (x) Phi_i(w,l-g w_i) = Phi_i(z,l-g w_i) (x) Phi_i(w,l)
///   i != j: R^B(z-w) Phi_i(z,l) (x) Phi_j(w,l-g w_i)
///             = alpha Phi_i(z,l-g w_j) (x) Phi_j(w,l) + beta Phi_j(z,l-g w_i) (x) Phi_i(w,l)
/// with alpha, beta at (z-w, l_i-l_j). `diagonal` selects the i = j or the i != j family;
/// `swap_coefficients` exchanges alpha and beta (negative control).
ResidualReport verify_irf_components(const ModuliConfig& cfg, bool diagonal, bool swap_coefficients = false);

}  // namespace elq
