#include <gtest/gtest.h>

#include "elq/diff_algebra.hpp"
#include "elq/errors.hpp"
#include "elq/theta.hpp"

using namespace elq;

namespace {

ModuliConfig small(int n) {
  ModuliConfig c;
  c.n = n;
  c.samples = 10;
  return c;
}

WeightVector lam(int n, double t = 0.0) {
  std::vector<cd> v;
  for (int i = 0; i < n; ++i) v.push_back(cd(0.21 * i - 0.07 * i * i + t, 0.09 * i - 0.3 * t));
  return WeightVector::projected(v);
}

double dist(const DiffOp& a, const DiffOp& b, const WeightVector& l) { return diffop_distance(a, b, l).abs; }

}  // namespace

TEST(DiffOp, ShiftExpInverse) {
  const auto cfg = small(3);
  const std::vector<HModule> layout{HModule::vector_rep(3), HModule::vector_rep(3)};
  const std::vector<int> legs{0, 1};
  const auto up = DiffOp::shift_exp(+1, layout, legs, 3, cfg.gamma);
  const auto down = DiffOp::shift_exp(-1, layout, legs, 3, cfg.gamma);
  EXPECT_EQ(dist(up * down, DiffOp::identity(9, 3, cfg.gamma), lam(3)), 0.0);
  EXPECT_EQ((up * down).support(std::vector{lam(3)}).size(), 1u);
}

TEST(DiffOp, ShiftExpOnSingleWeightIsPureShift) {
  const auto cfg = small(2);
  HModule one{1, {WeightKey::omega(2, 1)}};
  const std::vector<HModule> layout{one};
  const std::vector<int> legs{0};
  const auto op = DiffOp::shift_exp(-1, layout, legs, 2, cfg.gamma);
  ASSERT_EQ(op.terms().size(), 1u);
  EXPECT_EQ(op.terms().begin()->first, -WeightKey::omega(2, 1));
}

TEST(DiffOp, ShiftExpMatchesDefiningAction) {
  const auto cfg = small(3);
  const std::vector<HModule> layout{HModule::vector_rep(3)};
  const std::vector<int> legs{0};
  const DiffOp::TestFunction f = [](const WeightVector& l) {
    Vector v(3);
    for (int i = 0; i < 3; ++i) v(i) = std::exp(cd(i + 1.0, 0.5) * l[0]) + cd(0.0, i) * l[1] * l[2];
    return v;
  };
  const auto l = lam(3);
  for (int sign : {-1, +1}) {
    const Vector got = DiffOp::shift_exp(sign, layout, legs, 3, cfg.gamma).apply(f, l);
    for (int i = 0; i < 3; ++i) {
      // component i is f_i(lambda + sign gamma omega_i)
      const auto moved = l + WeightKey::omega(3, i).to_vector() * cd(sign * cfg.gamma);
      EXPECT_LT(std::abs(got(i) - f(moved)(i)), 1e-14);
    }
  }
}

TEST(DiffOp, CompositionLaw) {
  const int n = 2;
  const double g = 0.4;
  const LambdaMatrix c = [](const WeightVector& l) { return Matrix::Constant(1, 1, l[0] * l[0] + 1.0); };
  const LambdaMatrix c2 = [](const WeightVector& l) { return Matrix::Constant(1, 1, std::exp(l[1])); };
  const auto mu = WeightKey::omega(n, 0), nu = WeightKey::omega(n, 1);
  const DiffOp a(1, 1, n, g, {{mu, c}});
  const DiffOp b(1, 1, n, g, {{nu, c2}});
  const auto ab = a * b;
  ASSERT_EQ(ab.terms().size(), 1u);
  EXPECT_EQ(ab.terms().begin()->first, mu + nu);
  const auto l = lam(n);
  const cd want = c(l)(0, 0) * c2(shifted(l, mu, g))(0, 0);
  EXPECT_LT(std::abs(ab.eval(l).at(mu + nu)(0, 0) - want), 1e-15);
}

TEST(DiffOp, OracleAndAssociativity) {
  for (int n : {2, 3}) {
    EXPECT_TRUE(verify_composition_oracle(small(n)).pass);
    EXPECT_TRUE(verify_composition_associative(small(n)).pass);
  }
}

TEST(DiffOp, PruneDropsNoise) {
  const int n = 2;
  const auto tiny = DiffOp::constant(Matrix::Constant(2, 2, 1e-15), n, 0.3);
  const auto big = DiffOp(2, 2, n, 0.3, {{WeightKey::omega(n, 0), [](const WeightVector&) { return Matrix::Identity(2, 2); }}});
  const auto sum = tiny + big;
  const std::vector grid{lam(n)};
  EXPECT_EQ(sum.eval(lam(n)).size(), 1u);
  EXPECT_EQ(sum.pruned(grid).terms().size(), 1u);
  EXPECT_EQ(sum.support(grid), (std::set{WeightKey::omega(n, 0)}));
}

TEST(DiffOp, InverseOfGradedOperator) {
  const auto cfg = small(2);
  const std::vector grid{lam(2), lam(2, 0.1), lam(2, -0.2)};
  const auto psi = prop4_intertwiner(cfg.ws[0], cfg);
  const auto id = DiffOp::identity(2, 2, cfg.gamma);
  const auto inv = psi.inverse(grid);
  EXPECT_LT(dist(psi * inv, id, lam(2, 0.05)), 1e-13);
  EXPECT_LT(dist(inv * psi, id, lam(2, 0.05)), 1e-13);
  EXPECT_TRUE(verify_prop4_inverse(cfg).pass);
}

TEST(DiffOp, InverseRejectsMixedEntries) {
  const int n = 2;
  const auto a = DiffOp::identity(2, n, 0.3) +
                 DiffOp(2, 2, n, 0.3, {{WeightKey::omega(n, 0), [](const WeightVector&) { return Matrix::Identity(2, 2); }}});
  const std::vector grid{lam(n)};
  EXPECT_THROW(a.inverse(grid), domain_error);
}

TEST(Twist, IdentityMatricesGiveLTimesShift) {
  const auto cfg = small(2);
  const auto v = vector_rep_F(cfg.ws[0], false, cfg);
  const SFunction id = [](cd, const WeightVector&) { return Matrix::Identity(2, 2); };
  const auto db = twist_with(v, id, id, {}, cfg);
  const cd z{0.31, 0.22};
  const std::vector<HModule> layout{HModule::vector_rep(2), HModule::vector_rep(2)};
  const std::vector<int> aux{0};
  const auto want = DiffOp::multiplication([&](const WeightVector& l) { return v.L(z, l); }, 4, 4, 2, cfg.gamma) *
                    DiffOp::shift_exp(-1, layout, aux, 2, cfg.gamma);
  EXPECT_LT(dist(db.L(z), want, lam(2)), 1e-15);
}

TEST(Twist, TrivialObjectGivesIcx) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const auto icx = icx_object(cfg);
    const cd z{0.61, 0.37};
    const auto l = lam(n);
    const auto got = icx.L(z).eval(l);
    ASSERT_EQ(got.size(), static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const auto key = -WeightKey::omega(n, k);
      const Matrix want = build_S(z - cfg.x, l, cfg) * elementary(n, k, k) *
                          build_S(z - cfg.x - cfg.c, shifted(l, key, cfg.gamma), cfg).inverse();
      EXPECT_LT(max_abs(got.at(key) - want), 1e-12);
    }
  }
}

TEST(Twist, SupportKeyedByAuxWeight) {
  const auto cfg = small(3);
  EXPECT_TRUE(verify_twist_support(vector_rep_F(cfg.ws[1], false, cfg), cfg, "t.support").pass);
  EXPECT_TRUE(verify_icx_structure(small(2)).pass);
}

TEST(TwistedExchange, VectorTrivialAndZeroOffset) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const SMatrixEvaluator sx{cfg.x}, sxc{cfg.x + cfg.c};
    EXPECT_TRUE(verify_lemma1(vector_rep_F(cfg.ws[0], false, cfg), sx, sxc, cfg, "t.l1v").pass);
    EXPECT_TRUE(verify_lemma1(trivial_F(cfg), sx, sxc, cfg, "t.l1t").pass);
    EXPECT_TRUE(verify_lemma1(vector_rep_F(cfg.ws[0], false, cfg), sx, sx, cfg, "t.l1c").pass);
  }
}

TEST(Functors, RllAsDifferenceOperators) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    const BelavinR rb(cfg);
    EXPECT_TRUE(verify_rll_DB(icx_object(cfg), rb, "t.icx").pass);
    EXPECT_TRUE(verify_rll_DB(functor_F(vector_rep_F(cfg.ws[0], true, cfg), cfg), rb, "t.fv").pass);
    EXPECT_TRUE(verify_rll_DB(functor_H(vector_rep_B(cfg.ws[0], rb), cfg), rb, "t.hv").pass);
  }
}

TEST(Functors, HOfTrivialIsIcx) {
  const auto cfg = small(2);
  const BelavinR rb(cfg);
  const auto h = functor_H(trivial_B(cfg), cfg);
  const auto icx = icx_object(cfg);
  const cd z{0.44, 0.19};
  EXPECT_LT(dist(h.L(z), icx.L(z), lam(2)), 1e-15);
  const std::vector grid{lam(2)};
  EXPECT_EQ(functor_H(vector_rep_B(cfg.ws[0], rb), cfg).L(z).support(grid), icx.L(z).support(grid));
}

TEST(Functors, Functoriality) {
  for (int n : {2, 3}) EXPECT_TRUE(verify_functoriality(small(n)).pass);
  const auto cfg = small(2);
  const auto f = functor_F(vector_rep_F(cfg.ws[0], true, cfg), cfg);
  EXPECT_TRUE(morphism_check_DB(f, f, DiffOp::constant(Matrix::Identity(2, 2) * cd(2.0, 1.0), 2, cfg.gamma), cfg,
                                "t.scalar")
                  .pass);
}

TEST(Morphisms, IdentityAndRandom) {
  const auto cfg = small(2);
  const BelavinR rb(cfg);
  const auto h = functor_H(vector_rep_B(cfg.ws[0], rb), cfg);
  const auto id = morphism_check_DB(h, h, DiffOp::identity(2, 2, cfg.gamma), cfg, "t.id");
  EXPECT_TRUE(id.pass);
  EXPECT_EQ(id.max_abs, 0.0);
  Matrix m(2, 2);
  m << cd(0.3, 1), 2, cd(-1, 0.5), 0.7;
  const DiffOp rnd(2, 2, 2, cfg.gamma, {{WeightKey::omega(2, 0), [m](const WeightVector& l) { return Matrix(m * l[0]); }}});
  EXPECT_FALSE(morphism_check_DB(h, h, rnd, cfg, "t.rnd").pass);
}

TEST(TildeS, IdentityClosedFormAndDiagonal) {
  const auto cfg = small(3);
  const LambdaMatrix id = [](const WeightVector&) { return Matrix::Identity(3, 3); };
  EXPECT_EQ(dist(tilde_S(id, cfg), DiffOp::identity(3, 3, cfg.gamma), lam(3)), 0.0);
  EXPECT_TRUE(verify_tilde_S(cfg).pass);
  const LambdaMatrix s = [&](const WeightVector& l) { return build_S(cd(0.3, 0.4), l, cfg); };
  const auto v = tilde_S(s, cfg).eval(lam(3));
  const Matrix diag = v.at(WeightKey::zero(3));
  for (int i = 0; i < 3; ++i) {
    const auto at = shifted(lam(3), -WeightKey::omega(3, i), cfg.gamma);
    EXPECT_LT(std::abs(diag(i, i) - s(at)(i, i)), 1e-14);
  }
  for (const auto& [k, c] : v)
    if (!k.is_zero()) EXPECT_LT(c.diagonal().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PointIntertwiner, PassesAndLiteralReadingsFail) {
  for (int n : {2, 3}) {
    const auto cfg = small(n);
    EXPECT_TRUE(verify_prop4(cfg, "t.p4").pass);
    EXPECT_FALSE(verify_prop4(cfg, "t.p4.conjugation").pass);
    EXPECT_FALSE(verify_prop4(cfg, "t.p4.pointwise").pass);
  }
}

TEST(PointIntertwiner, SingularAtXPlusC) {
  const auto cfg = small(2);
  EXPECT_THROW(prop4_intertwiner(cfg.x + cfg.c, cfg), singularity_error);
  EXPECT_THROW(prop4_intertwiner(cfg.x + cfg.c + 1.0 + cfg.tau, cfg), singularity_error);
  const std::vector<cd> ws{cfg.ws[0], cfg.x + cfg.c};
  EXPECT_THROW(canonical_intertwiner(ws, cfg), singularity_error);
}

TEST(Canonical, SinglePointMatchesPointIntertwiner) {
  const auto cfg = small(2);
  const std::vector<cd> ws{cfg.ws[2]};
  EXPECT_LT(dist(canonical_intertwiner(ws, cfg), prop4_intertwiner(ws[0], cfg), lam(2)), 1e-15);
}

TEST(Canonical, TwoAndThreePoints) {
  auto cfg = small(2);
  EXPECT_TRUE(verify_canonical(cfg, 2, "t.c2").pass);
  EXPECT_TRUE(verify_canonical(cfg, 3, "t.c3").pass);
  EXPECT_TRUE(verify_canonical(small(3), 2, "t.c2n3").pass);
}

TEST(TensorIntertwiners, IdentityAndProportionality) {
  const auto cfg = small(2);
  const auto id2 = DiffOp::identity(2, 2, cfg.gamma);
  EXPECT_EQ(dist(tensor_intertwiners(id2, id2), DiffOp::identity(4, 2, cfg.gamma), lam(2)), 0.0);
  EXPECT_TRUE(verify_tensor_proportional(cfg).pass);
  const std::vector grid{lam(2), lam(2, 0.2)};
  const std::vector<cd> ws{cfg.ws[0], cfg.ws[1]};
  const auto closed = canonical_intertwiner(ws, cfg);
  EXPECT_LT(proportionality_spread(closed.scaled(cd(0.0, 3.0)), closed, grid), 1e-14);
}

TEST(TensorIntertwiners, FailingFactorFails) {
  const auto cfg = small(2);
  const BelavinR rb(cfg);
  const std::vector<cd> ws{cfg.ws[0], cfg.ws[1]};
  const auto h = functor_H(tensor_vector_B(ws, rb), cfg);
  const auto f = functor_F(tensor_vector_F(ws, cfg), cfg);
  const auto good = tensor_intertwiners(prop4_intertwiner(ws[0], cfg), prop4_intertwiner(ws[1], cfg));
  EXPECT_TRUE(morphism_check_DB(h, f, good, cfg, "t.good").pass);
  const auto bad = tensor_intertwiners(prop4_intertwiner(ws[0], cfg), prop4_pointwise_reading(ws[1], cfg));
  EXPECT_FALSE(morphism_check_DB(h, f, bad, cfg, "t.bad").pass);
}
