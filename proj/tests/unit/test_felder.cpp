#include <gtest/gtest.h>

#include <random>

#include "elq/errors.hpp"
#include "elq/felder.hpp"
#include "elq/theta.hpp"

using namespace elq;

namespace {

ModuliConfig small(int n) {
  ModuliConfig c;
  c.n = n;
  c.samples = 20;
  return c;
}

WeightVector lam(int n) {
  std::vector<cd> v;
  for (int i = 0; i < n; ++i) v.push_back(cd(0.23 * i - 0.1 * i * i, 0.11 * i));
  return WeightVector::projected(v);
}

const cd kW1{0.33, -0.12}, kW2{-0.21, 0.27}, kW3{0.05, 0.4};

}  // namespace

TEST(Felder, InitialValueIsPermutation) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    EXPECT_LT(max_abs(build_RF(0.0, lam(n), cfg) - permutation(n, n)), 1e-12);
    EXPECT_TRUE(verify_rf_initial(cfg).pass);
  }
}

TEST(Felder, UnitarityAndWeightZero) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    EXPECT_TRUE(verify_rf_unitarity(cfg).pass);
    EXPECT_TRUE(verify_rf_weight_zero(cfg).pass);
    EXPECT_TRUE(verify_alpha_beta_table(cfg).pass);
  }
}

TEST(Felder, DynamicalYangBaxter) {
  for (int n : {2, 3}) {
    const auto r = verify_dqybe(small(n));
    EXPECT_TRUE(r.pass) << r.max_rel;
    EXPECT_LT(r.max_rel, 1e-10);
  }
}

TEST(Felder, DynamicalYangBaxterNegativeControl) {
  auto cfg = small(2);
  cfg.beta_perturbation = 1e-3;
  EXPECT_FALSE(verify_dqybe(cfg).pass);
}

TEST(Felder, CoincidentSpectralPoints) {
  // z = w: R12(0) = P and both sides stay finite.
  const auto cfg = small(2);
  const auto fo = vector_rep_F(0.0, false, cfg);
  const auto l = lam(2);
  EXPECT_LT(max_abs(fo.L(0.0, l) - permutation(2, 2)), 1e-12);
}

TEST(Felder, VectorRepresentation) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const auto v = vector_rep_F(kW1, false, cfg);
    EXPECT_LT(max_abs(v.L(kW1, lam(n)) - permutation(n, n)), 1e-12);
    ASSERT_EQ(v.factors.size(), 1u);
    for (int i = 0; i < n; ++i) EXPECT_EQ(v.factors[0].weights[i], WeightKey::omega(n, i));
    EXPECT_TRUE(verify_rll_F(v, cfg, "t.vf").pass);
    EXPECT_TRUE(verify_weight_zero_F(v, cfg, "t.vf.wz").pass);
    EXPECT_TRUE(verify_periodicity_F(v, cfg, "t.vf.per").pass);
    EXPECT_TRUE(verify_rll_F(vector_rep_F(kW1, true, cfg), cfg, "t.vft").pass);
  }
}

TEST(Felder, TensorWithTrivial) {
  const auto cfg = small(2);
  const auto v = vector_rep_F(kW1, false, cfg);
  const auto t = trivial_F(cfg);
  const auto l = lam(2);
  const cd z{0.6, 0.2};
  EXPECT_LT(max_abs(tensor_F(t, v, cfg).L(z, l) - v.L(z, l)), 1e-14);
  EXPECT_LT(max_abs(tensor_F(v, t, cfg).L(z, l) - v.L(z, l)), 1e-14);
}

TEST(Felder, TensorProduct) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const auto p = tensor_F(vector_rep_F(kW1, false, cfg), vector_rep_F(kW2, false, cfg), cfg);
    const auto sp = p.space(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        EXPECT_EQ(sp.weights[i * n + j], WeightKey::omega(n, i) + WeightKey::omega(n, j));
    EXPECT_TRUE(verify_rll_F(p, cfg, "t.tensor").pass);
    EXPECT_TRUE(verify_weight_zero_F(p, cfg, "t.tensor.wz").pass);
    EXPECT_TRUE(verify_periodicity_F(p, cfg, "t.tensor.per").pass);
  }
}

TEST(Felder, TensorAssociative) {
  const auto cfg = small(2);
  const auto a = vector_rep_F(kW1, false, cfg), b = vector_rep_F(kW2, false, cfg), c = vector_rep_F(kW3, false, cfg);
  const auto left = tensor_F(tensor_F(a, b, cfg), c, cfg);
  const auto right = tensor_F(a, tensor_F(b, c, cfg), cfg);
  const cd z{0.6, 0.2};
  EXPECT_LT(max_abs(left.L(z, lam(2)) - right.L(z, lam(2))), 1e-13);
}

TEST(Felder, Duals) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const auto t = dual_F(trivial_F(cfg), cfg);
    EXPECT_LT(max_abs(t.L(cd(0.3, 0.1), lam(n)) - Matrix::Identity(n, n)), 1e-14);
    EXPECT_TRUE(t.space(n).weights[0].is_zero());
    const auto d = dual_F(vector_rep_F(kW1, false, cfg), cfg);
    for (int i = 0; i < n; ++i) EXPECT_EQ(d.factors[0].weights[i], -WeightKey::omega(n, i));
    EXPECT_TRUE(verify_rll_F(d, cfg, "t.dual").pass);
    EXPECT_TRUE(verify_weight_zero_F(d, cfg, "t.dual.wz").pass);
  }
}

TEST(Felder, MorphismChecks) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const auto v = vector_rep_F(kW1, false, cfg);
    EXPECT_TRUE(morphism_check_F(v, v, identity_F(v.space(n)), cfg, "t.id").pass);
    EXPECT_EQ(morphism_check_F(v, v, identity_F(v.space(n)), cfg, "t.id").max_abs, 0.0);
    const HModule sp = v.space(n);
    const FMorphism scaled{sp, sp, [n](const WeightVector&) { return Matrix(cd(2.5, -1.0) * Matrix::Identity(n, n)); }};
    EXPECT_TRUE(morphism_check_F(v, v, scaled, cfg, "t.scaled").pass);
    // a weight-zero but non-equivariant map: a generic diagonal
    const FMorphism diag{sp, sp, [n](const WeightVector&) {
                           Matrix m = Matrix::Zero(n, n);
                           for (int i = 0; i < n; ++i) m(i, i) = 1.0 + i;
                           return m;
                         }};
    EXPECT_FALSE(morphism_check_F(v, v, diag, cfg, "t.diag").pass);
    // random dense map (weight projection happens structurally)
    std::mt19937_64 eng(1);
    std::normal_distribution<double> g;
    Matrix rnd(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) rnd(i, j) = cd(g(eng), g(eng));
    const FMorphism random{sp, sp, [rnd](const WeightVector&) { return rnd; }};
    EXPECT_FALSE(morphism_check_F(v, v, random, cfg, "t.rand").pass);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j) EXPECT_EQ(random(lam(n))(i, j), cd(0.0));
  }
}

TEST(Felder, ExchangeMorphismAndDual) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const auto a = tensor_F(vector_rep_F(kW1, false, cfg), vector_rep_F(kW2, false, cfg), cfg);
    const auto b = tensor_F(vector_rep_F(kW2, false, cfg), vector_rep_F(kW1, false, cfg), cfg);
    const auto phi = exchange_morphism_F(kW1, kW2, cfg);
    EXPECT_TRUE(morphism_check_F(a, b, phi, cfg, "t.exch").pass);
    // scalar multiple of an intertwiner
    const FMorphism twice{phi.source, phi.target, [phi](const WeightVector& l) { return Matrix(3.0 * phi(l)); }};
    EXPECT_TRUE(morphism_check_F(a, b, twice, cfg, "t.exch2").pass);
    // the transposed-shifted morphism intertwines the duals in the opposite direction
    EXPECT_TRUE(morphism_check_F(dual_F(b, cfg), dual_F(a, cfg), dual_morphism_F(phi, cfg), cfg, "t.exchd").pass);
  }
}

TEST(Felder, TensorMorphisms) {
  const int n = 2;
  const auto cfg = small(n);
  const auto v = HModule::vector_rep(n);
  const auto idv = tensor_F_morphisms(identity_F(v), identity_F(v), cfg);
  EXPECT_LT(max_abs(idv(lam(n)) - Matrix::Identity(4, 4)), 1e-15);
  // constant phi: (phi (x) id) is literal
  const FMorphism c{v, v, [](const WeightVector&) { return Matrix(Matrix::Identity(2, 2) * 2.0); }};
  EXPECT_LT(max_abs(tensor_F_morphisms(c, identity_F(v), cfg)(lam(n)) - 2.0 * Matrix::Identity(4, 4)), 1e-15);
  // (exchange (x) id) intertwines (V1 V2) V3 -> (V2 V1) V3; (id (x) exchange) intertwines V3 (V1 V2) -> V3 (V2 V1)
  const auto f1 = vector_rep_F(kW1, false, cfg), f2 = vector_rep_F(kW2, false, cfg), f3 = vector_rep_F(kW3, false, cfg);
  const auto phi = exchange_morphism_F(kW1, kW2, cfg);
  const auto src = tensor_F(tensor_F(f1, f2, cfg), f3, cfg);
  const auto dst = tensor_F(tensor_F(f2, f1, cfg), f3, cfg);
  EXPECT_TRUE(morphism_check_F(src, dst, tensor_F_morphisms(phi, identity_F(v), cfg), cfg, "t.tm1").pass);
  const auto src2 = tensor_F(f3, tensor_F(f1, f2, cfg), cfg);
  const auto dst2 = tensor_F(f3, tensor_F(f2, f1, cfg), cfg);
  EXPECT_TRUE(morphism_check_F(src2, dst2, tensor_F_morphisms(identity_F(v), phi, cfg), cfg, "t.tm2").pass);
}
