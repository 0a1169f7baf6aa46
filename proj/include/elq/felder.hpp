#pragma once

// Dynamical R-matrix R^F(z, lambda) and its representation category.

#include <functional>
#include <vector>

#include "elq/config.hpp"
#include "elq/dynamical.hpp"
#include "elq/linalg.hpp"
#include "elq/residual.hpp"
#include "elq/weights.hpp"

namespace elq {

/// R^F(z,l) = sum_i E_ii(x)E_ii + sum_{i!=j} alpha(z,l_i-l_j) E_ii(x)E_jj + beta(z,l_i-l_j) E_ji(x)E_ij.
/// cfg.beta_perturbation is added to every beta coefficient.
Matrix build_RF(cd z, const WeightVector& lambda, const ModuliConfig& cfg);

/// Same assembly from the theta(l + gamma) normalization of alpha.
Matrix build_RF_plus_gauge(cd z, const WeightVector& lambda, const ModuliConfig& cfg);

/// Object (V, L(z, lambda)) with L acting on C^n (x) V. V is the tensor product of `factors`.
struct FObject {
  std::vector<HModule> factors;
  std::function<Matrix(cd, const WeightVector&)> L;
  std::vector<Lattice> z_poles;

  HModule space(int n) const { return tensor(factors, n); }
  Index dim() const;
};

/// Weight-zero map V -> V'. Evaluation zeroes every entry joining different weights.
struct FMorphism {
  HModule source;
  HModule target;
  std::function<Matrix(const WeightVector&)> phi;

  Matrix operator()(const WeightVector& lambda) const;
};

FObject trivial_F(const ModuliConfig& cfg);

/// (C^n, R^F(z - w, lambda)); with `twisted`, L is multiplied by chi(z - w).
FObject vector_rep_F(cd w, bool twisted, const ModuliConfig& cfg);

/// (V (x) V', L_12(z, lambda - gamma h_3) L'_13(z, lambda)).
FObject tensor_F(const FObject& a, const FObject& b, const ModuliConfig& cfg);

/// L*(z, lambda) = [L^{-1}(z, lambda + gamma mu)]^{t_2}, mu the V-weight of the column of L^{-1};
/// V* carries the negated weights.
FObject dual_F(const FObject& a, const ModuliConfig& cfg);

FMorphism identity_F(const HModule& v);

/// (phi (x) phi')(lambda) = phi(lambda - gamma h_2) (x) phi'(lambda).
FMorphism tensor_F_morphisms(const FMorphism& phi, const FMorphism& phi2, const ModuliConfig& cfg);

/// phi*(lambda) = phi(lambda + gamma h)^t, W* -> V*.
FMorphism dual_morphism_F(const FMorphism& phi, const ModuliConfig& cfg);

/// R^F(w2 - w1, lambda) P : V_F(w1) (x) V_F(w2) -> V_F(w2) (x) V_F(w1).
FMorphism exchange_morphism_F(cd w1, cd w2, const ModuliConfig& cfg);

// Checks. Each draws its samples from the stream named by the check.

ResidualReport verify_rf_initial(const ModuliConfig& cfg);
ResidualReport verify_rf_unitarity(const ModuliConfig& cfg);
ResidualReport verify_rf_weight_zero(const ModuliConfig& cfg);
ResidualReport verify_alpha_beta_table(const ModuliConfig& cfg);
ResidualReport verify_dqybe(const ModuliConfig& cfg);

/// R12(z-w, l - g h3) L13(z, l) L23(w, l - g h1) = L23(w, l) L13(z, l - g h2) R12(z-w, l).
ResidualReport verify_rll_F(const FObject& a, const ModuliConfig& cfg, const std::string& name);
/// [h_1 + h_2, L(z, lambda)] = 0.
ResidualReport verify_weight_zero_F(const FObject& a, const ModuliConfig& cfg, const std::string& name);
/// L(z, lambda + n omega_i) = L(z, lambda) for every i.
ResidualReport verify_periodicity_F(const FObject& a, const ModuliConfig& cfg, const std::string& name);

/// L'(z, l) (1 (x) phi(l - g h_1)) = (1 (x) phi(l)) L(z, l).
ResidualReport morphism_check_F(const FObject& a, const FObject& b, const FMorphism& phi,
                                const ModuliConfig& cfg, const std::string& name);

/// Largest |entry| of m joining basis vectors of different weight.
double weight_violation(const Matrix& m, const std::vector<WeightKey>& row_weights,
                        const std::vector<WeightKey>& col_weights);

}  // namespace elq
