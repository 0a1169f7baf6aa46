#pragma once

// Belavin's R-matrix, obtained from R^F through the intertwining matrix S, and its
// representation category.

#include <functional>
#include <map>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "elq/config.hpp"
#include "elq/dynamical.hpp"
#include "elq/linalg.hpp"
#include "elq/residual.hpp"
#include "elq/weights.hpp"

namespace elq {

/// R^B(z) = S2(w0,l) S1(z+w0,l-g h2) R^F(z,l) [S1(z+w0,l) S2(w0,l-g h1)]^{-1} at l = lambda_ref.
/// On a singular S factor, w0 is perturbed up to four times before singularity_error.
Matrix build_RB(cd z, const ModuliConfig& cfg, const WeightVector& lambda_ref, cd w0);

/// Reference data (lambda_ref, w0) drawn from the reserved stream, index `k`.
/// w0 is drawn from {a + b tau : |a| < 1/2, |b| < 0.3} away from the lattice.
std::pair<WeightVector, cd> belavin_reference(const ModuliConfig& cfg, std::uint64_t k = 0);
/// Same rule on an arbitrary stream.
std::pair<WeightVector, cd> reference_from_stream(const ModuliConfig& cfg, std::uint64_t stream, std::uint64_t k);

/// R^B with fixed reference data and a per-z memo. Safe for concurrent use.
class BelavinR {
 public:
  explicit BelavinR(const ModuliConfig& cfg);
  BelavinR(const ModuliConfig& cfg, WeightVector lambda_ref, cd w0);

  Matrix operator()(cd z) const;

  const WeightVector& lambda_ref() const { return lambda_ref_; }
  cd w0() const { return w0_; }
  const ModuliConfig& config() const { return cfg_; }
  std::size_t cache_size() const;

 private:
  ModuliConfig cfg_;
  WeightVector lambda_ref_;
  cd w0_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<double, double>, Matrix> cache_;
};

/// Object (V, L(z)) with L acting on C^n (x) V, V the tensor product of `factors`.
struct BObject {
  std::vector<HModule> factors;
  std::function<Matrix(cd)> L;
  std::vector<Lattice> z_poles;

  HModule space(int n) const { return tensor(factors, n); }
  Index dim() const;
};

BObject trivial_B(const ModuliConfig& cfg);
/// (C^n, chi(z - w) R^B(z - w)).
/// The object keeps a reference to `rb`, which must outlive it.
BObject vector_rep_B(cd w, const BelavinR& rb);
/// (C^n, chi(z) R^B(z - w)).
BObject vector_rep_B_literal(cd w, const BelavinR& rb);
/// (V (x) V', L_12(z) L'_13(z)).
BObject tensor_B(const BObject& a, const BObject& b, const ModuliConfig& cfg);
/// L*(z) = (L(z)^{-1})^{t_2}.
BObject dual_B(const BObject& a, const ModuliConfig& cfg);

ResidualReport verify_rb_reference_independence(const ModuliConfig& cfg, int references = 20);
ResidualReport verify_rb_unitarity(const BelavinR& rb);
ResidualReport verify_rb_initial(const BelavinR& rb);
/// R(z+1) = A1 R A1^{-1} = A2^{-1} R A2.
ResidualReport verify_rb_translation_one(const BelavinR& rb);
/// R(z+tau) = e^{-2 i pi (n-1) gamma / n} B1 R B1^{-1} = e^{-2 i pi (n-1) gamma / n} B2^{-1} R B2.
ResidualReport verify_rb_translation_tau(const BelavinR& rb);
/// [R(z), A (x) A] = [R(z), B (x) B] = 0.
ResidualReport verify_rb_heisenberg(const BelavinR& rb);
ResidualReport verify_rb_qybe(const BelavinR& rb);
/// Entries <p q|R|r s> off the pattern p + q = r + s (mod n), absolute.
ResidualReport verify_rb_support_pattern(const BelavinR& rb);

/// L(z + n) = L(z) and L(z + n tau) = L(z).
ResidualReport verify_periodicity_B(const BObject& a, const ModuliConfig& cfg, const std::string& name);
/// R12(z-w) L13(z) L23(w) = L23(w) L13(z) R12(z-w).
ResidualReport verify_rll_B(const BObject& a, const BelavinR& rb, const std::string& name);
/// (1 (x) phi) L(z) = L'(z) (1 (x) phi).
ResidualReport morphism_check_B(const BObject& a, const BObject& b, const Matrix& phi, const ModuliConfig& cfg,
                                const std::string& name);

/// T = sum_i E_ii (x) D_i with D_{i+1} = X D_i. X must satisfy X^n = 1 and commute with D_1.
struct DiagonalSpec {
  Matrix X;
  Matrix D1;
};
/// Checks R12(z) T13 T23 = T23 T13 R12(z). Throws domain_error when X^n != 1.
ResidualReport diagonal_solution_converse(int n, Index u_dim, const DiagonalSpec& spec, const BelavinR& rb);
/// Same identity for arbitrary blocks D_1..D_n (negative controls).
ResidualReport diagonal_solution_check(const std::vector<Matrix>& blocks, const BelavinR& rb,
                                       const std::string& name);

}  // namespace elq
