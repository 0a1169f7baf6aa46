#pragma once

// Difference operators sum_mu C_mu(lambda) T_mu, the twist of F-objects into them, the
// functors F and H, and the intertwiners between their images.

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "elq/belavin.hpp"
#include "elq/config.hpp"
#include "elq/dynamical.hpp"
#include "elq/felder.hpp"
#include "elq/linalg.hpp"
#include "elq/residual.hpp"
#include "elq/vertex_irf.hpp"
#include "elq/weights.hpp"

namespace elq {

/// Relative threshold below which a coefficient counts as zero.
inline constexpr double kPruneThreshold = 1e-12;

/// Finite sum of C_mu(lambda) T_mu with (T_mu f)(lambda) = f(lambda + gamma mu).
/// Immutable; composition builds new coefficient closures.
class DiffOp {
 public:
  using Terms = std::map<WeightKey, LambdaMatrix>;
  using Values = std::map<WeightKey, Matrix>;
  using TestFunction = std::function<Vector(const WeightVector&)>;

  DiffOp(Index rows, Index cols, int n, double gamma, Terms terms = {});

  /// Multiplication by a(lambda).
  static DiffOp multiplication(LambdaMatrix a, Index rows, Index cols, int n, double gamma);
  static DiffOp constant(const Matrix& m, int n, double gamma);
  static DiffOp identity(Index dim, int n, double gamma);
  /// sum_b E_bb T_{keys[b]}.
  static DiffOp graded_shift(std::span<const WeightKey> keys, int n, double gamma);
  /// e^{sign gamma D} on the selected legs: sum_mu (projector on weight mu of legs) T_{sign mu}.
  /// Throws dimension_error when a leg has no declared weights.
  static DiffOp shift_exp(int sign, std::span<const HModule> layout, std::span<const int> legs, int n,
                          double gamma);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  int rank() const { return n_; }
  double gamma() const { return gamma_; }
  const Terms& terms() const { return terms_; }

  /// this o rhs: (C T_mu)(C' T_nu) = C(lambda) C'(lambda + gamma mu) T_{mu + nu}.
  DiffOp compose(const DiffOp& rhs) const;
  DiffOp operator*(const DiffOp& rhs) const { return compose(rhs); }
  DiffOp operator+(const DiffOp& rhs) const;
  DiffOp operator-(const DiffOp& rhs) const;
  DiffOp scaled(cd s) const;

  /// Coefficients act on `legs` of a product with factor dimensions `dims`; shifts unchanged.
  DiffOp embed(std::vector<int> legs, std::vector<Index> dims) const;

  /// Coefficients at lambda, terms below kPruneThreshold * max(1, largest) dropped.
  Values eval(const WeightVector& lambda) const;
  /// Keys surviving the prune at some point of the grid.
  std::set<WeightKey> support(std::span<const WeightVector> grid) const;
  /// Terms whose sup-norm over the grid falls below the prune threshold removed.
  DiffOp pruned(std::span<const WeightVector> grid) const;

  /// (D f)(lambda) = sum_mu C_mu(lambda) f(lambda + gamma mu).
  Vector apply(const TestFunction& f, const WeightVector& lambda) const;

  /// Inverse of an operator whose entry (i, j) has a single shift key r_i + c_j. The grading
  /// is read off at `probes`; throws domain_error for other supports and singularity_error
  /// for a singular coefficient.
  DiffOp inverse(std::span<const WeightVector> probes) const;

 private:
  Index rows_;
  Index cols_;
  int n_;
  double gamma_;
  Terms terms_;
};

/// max_mu |A_mu - B_mu| over the union of pruned supports, and max_mu |B_mu|.
struct DiffOpDistance {
  double abs = 0.0;
  double scale = 0.0;
};
DiffOpDistance diffop_distance(const DiffOp& a, const DiffOp& b, const WeightVector& lambda);

/// Object (V, L(z)) with L(z) a difference operator on C^n (x) V.
struct DBObject {
  std::vector<HModule> factors;
  std::function<DiffOp(cd)> L;
  std::vector<Lattice> z_poles;

  HModule space(int n) const { return tensor(factors, n); }
  Index dim() const;
};

/// (z, lambda) -> n x n matrix.
using SFunction = std::function<Matrix(cd, const WeightVector&)>;

/// L^{S,S'}(z) = S_1(z, l - g h_2) L(z, l) e^{-g D_1} S'_1(z, l)^{-1}. `s2_singular` lists the
/// lattices where S' is singular; they are added to the object's z-poles.
DBObject twist_with(const FObject& a, SFunction s, SFunction s2, std::vector<Lattice> s2_singular,
                    const ModuliConfig& cfg);
DBObject twist(const FObject& a, const SMatrixEvaluator& s, const SMatrixEvaluator& s2, const ModuliConfig& cfg);

/// twist with (S_x, S_{x+c}).
DBObject functor_F(const FObject& a, const ModuliConfig& cfg);

/// (C, S(z - x, l) e^{-g D_1} S(z - x - c, l)^{-1}).
DBObject icx_object(const ModuliConfig& cfg);

/// (V, (I^c_x)_12(z) L_13(z)).
DBObject functor_H(const BObject& b, const ModuliConfig& cfg);

/// T(z,w,l) = S2(w,l) S1(z,l-g h2) R^F(z-w,l) S2(w,l-g h1)^{-1} S1(z,l)^{-1}.
Matrix lemma_T(cd z, cd w, const WeightVector& lambda, const SMatrixEvaluator& s, const ModuliConfig& cfg);
/// T'(z,w,l) = S'1(z,l) S'2(w,l+g h1) R^F(z-w,l) S'1(z,l+g h2)^{-1} S'2(w,l)^{-1}.
Matrix lemma_T_prime(cd z, cd w, const WeightVector& lambda, const SMatrixEvaluator& s2, const ModuliConfig& cfg);

/// T12(z,w,l-g h3) L13(z) L23(w) = L23(w) L13(z) T'12(z,w,l) for L = L^{S,S'} of `a`.
ResidualReport verify_lemma1(const FObject& a, const SMatrixEvaluator& s, const SMatrixEvaluator& s2,
                             const ModuliConfig& cfg, const std::string& name);

/// R12(z-w) L13(z) L23(w) = L23(w) L13(z) R12(z-w) as difference operators.
ResidualReport verify_rll_DB(const DBObject& a, const BelavinR& rb, const std::string& name);

/// (1 (x) psi) L_a(z) = L_b(z) (1 (x) psi) with psi a difference operator V_a -> V_b.
ResidualReport morphism_check_DB(const DBObject& a, const DBObject& b, const DiffOp& psi, const ModuliConfig& cfg,
                                 const std::string& name);

/// e^{-g D} S(z, l) e^{g D} on C^n.
DiffOp tilde_S(const LambdaMatrix& s, const ModuliConfig& cfg);
/// Closed form: term (i, j) is S_ij(z, l - g omega_i) E_ij T_{omega_j - omega_i}.
DiffOp tilde_S_closed(const LambdaMatrix& s, const ModuliConfig& cfg);

/// psi = e^{-g D} S(w - x - c, l)^{-1}, a difference operator on C^n mapping H(V_B(w)) to
/// F(V~_F(w)). Throws singularity_error when w - x - c is within pole_delta of Z + tau Z.
DiffOp prop4_intertwiner(cd w, const ModuliConfig& cfg);
/// e^{-g D} S(w - x - c, l)^{-1} e^{g D}.
DiffOp prop4_conjugation_reading(cd w, const ModuliConfig& cfg);
/// S(w - x - c, l)^{-1} as a multiplication operator.
DiffOp prop4_pointwise_reading(cd w, const ModuliConfig& cfg);

/// e^{-g sum_i D_i} S_r^{-1}(w_r - x - c, l + g sum_{i<r} h_i) ... S_1^{-1}(w_1 - x - c, l).
DiffOp canonical_intertwiner(std::span<const cd> ws, const ModuliConfig& cfg);

/// psi2_2 o psi1_1 on V1 (x) V2.
DiffOp tensor_intertwiners(const DiffOp& psi1, const DiffOp& psi2);

/// Standard deviation of the entrywise ratios a/b over entries with |b| above 1e-8 max|b|,
/// at every key and every lambda of the grid. Infinite when supports differ.
double proportionality_spread(const DiffOp& a, const DiffOp& b, std::span<const WeightVector> grid);

/// Tensor products of the F and H images of the vector objects at ws.
FObject tensor_vector_F(std::span<const cd> ws, const ModuliConfig& cfg);
BObject tensor_vector_B(std::span<const cd> ws, const BelavinR& rb);

// Checks.

/// For n = 2: every entry of I^c_x has support exactly {-omega_1, -omega_2}.
ResidualReport verify_icx_structure(const ModuliConfig& cfg);
/// Every key in the support of twist(a) is -omega_i (shift keyed by the weight of leg 1).
ResidualReport verify_twist_support(const FObject& a, const ModuliConfig& cfg, const std::string& name);
/// D(D' f) = (D D') f on random test functions.
ResidualReport verify_composition_oracle(const ModuliConfig& cfg);
/// (D D') D'' = D (D' D'').
ResidualReport verify_composition_associative(const ModuliConfig& cfg);
/// tilde_S equals its closed form.
ResidualReport verify_tilde_S(const ModuliConfig& cfg);
/// prop4_intertwiner at each w of cfg.ws.
ResidualReport verify_prop4(const ModuliConfig& cfg, const std::string& name);
/// psi o psi^{-1} = id.
ResidualReport verify_prop4_inverse(const ModuliConfig& cfg);
/// canonical_intertwiner for the first r points of cfg.ws.
ResidualReport verify_canonical(const ModuliConfig& cfg, int r, const std::string& name);
/// Ratio spread between tensor_intertwiners and canonical_intertwiner (r = 2).
ResidualReport verify_tensor_proportional(const ModuliConfig& cfg);
/// The exchange morphism of V_F(w1) (x) V_F(w2) passes morphism_check_DB between F images.
ResidualReport verify_functoriality(const ModuliConfig& cfg);

}  // namespace elq
