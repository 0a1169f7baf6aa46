#include "elq/felder.hpp"

#include <cmath>
#include <numbers>

#include "elq/errors.hpp"
#include "elq/sampling.hpp"
#include "elq/theta.hpp"

namespace elq {

namespace {

const cd kI{0.0, 1.0};

Matrix assemble_RF(cd z, const WeightVector& lambda, const ModuliConfig& cfg,
                   AlphaBeta (*coeffs)(cd, cd, const ModuliConfig&)) {
  const int n = cfg.n;
  if (lambda.rank() != n) throw dimension_error("build_RF: lambda rank differs from n");
  Matrix r = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    r(i * n + i, i * n + i) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ab = coeffs(z, lambda[i] - lambda[j], cfg);
      // E_ii (x) E_jj
      r(i * n + j, i * n + j) += ab.alpha;
      // E_ji (x) E_ij : e_i (x) e_j -> e_j (x) e_i
      r(j * n + i, i * n + j) += ab.beta + cfg.beta_perturbation;
    }
  }
  return r;
}

std::vector<WeightKey> weights_of(const std::vector<HModule>& layout, int n) {
  std::vector<int> all(layout.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return leg_weights(layout, all, n);
}

std::vector<Lattice> concat(std::vector<Lattice> a, const std::vector<Lattice>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Matrix build_RF(cd z, const WeightVector& lambda, const ModuliConfig& cfg) {
  return assemble_RF(z, lambda, cfg, &alpha_beta);
}

Matrix build_RF_plus_gauge(cd z, const WeightVector& lambda, const ModuliConfig& cfg) {
  return assemble_RF(z, lambda, cfg, &alpha_beta_plus_gauge);
}

Index FObject::dim() const {
  Index d = 1;
  for (const auto& f : factors) d *= f.dim;
  return d;
}

Matrix FMorphism::operator()(const WeightVector& lambda) const {
  Matrix m = phi(lambda);
  if (m.rows() != target.dim || m.cols() != source.dim) throw dimension_error("FMorphism: shape mismatch");
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (target.weights[static_cast<std::size_t>(i)] != source.weights[static_cast<std::size_t>(j)]) m(i, j) = 0.0;
  return m;
}

FObject trivial_F(const ModuliConfig& cfg) {
  const int n = cfg.n;
  return FObject{{HModule::trivial(n)},
                 [n](cd, const WeightVector&) { return Matrix(Matrix::Identity(n, n)); },
                 {}};
}

FObject vector_rep_F(cd w, bool twisted, const ModuliConfig& cfg) {
  FObject o;
  o.factors = {HModule::vector_rep(cfg.n)};
  o.z_poles = {{w + cfg.gamma}, {w - cfg.gamma}};
  if (twisted) {
    o.z_poles.push_back({w});
    o.z_poles.push_back({w + (1.0 - 1.0 / cfg.n) * cfg.gamma});
    o.L = [w, cfg](cd z, const WeightVector& l) { return Matrix(chi(z - w, cfg) * build_RF(z - w, l, cfg)); };
  } else {
    o.L = [w, cfg](cd z, const WeightVector& l) { return build_RF(z - w, l, cfg); };
  }
  return o;
}

FObject tensor_F(const FObject& a, const FObject& b, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const HModule va = a.space(n), vb = b.space(n);
  FObject o;
  o.factors = a.factors;
  o.factors.insert(o.factors.end(), b.factors.begin(), b.factors.end());
  o.z_poles = concat(a.z_poles, b.z_poles);
  const std::vector<HModule> layout{HModule::vector_rep(n), va, vb};
  const std::vector<Index> dims{n, va.dim, vb.dim};
  o.L = [la = a.L, lb = b.L, layout, dims, cfg](cd z, const WeightVector& l) {
    const std::vector<int> shift_leg{2};
    const Matrix first = apply_dyn_shift(embedded([&](const WeightVector& m) { return la(z, m); }, {0, 1}, dims),
                                         layout, shift_leg, l, cfg.gamma, -1);
    const std::vector<int> legs{0, 2};
    return Matrix(first * leg_embed(lb(z, l), legs, dims));
  };
  return o;
}

FObject dual_F(const FObject& a, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const HModule v = a.space(n);
  FObject o;
  o.factors = {v.dual()};
  o.z_poles = a.z_poles;
  const std::vector<HModule> layout{HModule::vector_rep(n), v};
  o.L = [la = a.L, layout, n, d = v.dim, cfg](cd z, const WeightVector& l) {
    const std::vector<int> v_leg{1};
    const Matrix inv = apply_dyn_shift([&](const WeightVector& m) { return checked_inverse(la(z, m)); }, layout,
                                       v_leg, l, cfg.gamma, +1);
    return partial_transpose_second(inv, n, d);
  };
  return o;
}

FMorphism identity_F(const HModule& v) {
  return FMorphism{v, v, [d = v.dim](const WeightVector&) { return Matrix(Matrix::Identity(d, d)); }};
}

FMorphism tensor_F_morphisms(const FMorphism& phi, const FMorphism& phi2, const ModuliConfig& cfg) {
  const int n = cfg.n;
  FMorphism out{tensor(phi.source, phi2.source), tensor(phi.target, phi2.target), {}};
  out.phi = [phi, phi2, n, gamma = cfg.gamma](const WeightVector& l) {
    // phi(l - g h_2) (x) phi'(l): the shift uses the weight of the second factor's column.
    const std::vector<HModule> layout{phi.source, phi2.source};
    const std::vector<int> leg{1};
    const Index d2 = phi2.source.dim;
    const Matrix first = apply_dyn_shift(
        [&](const WeightVector& m) { return kron(phi(m), Matrix::Identity(d2, d2)); }, layout, leg, l, gamma, -1);
    return Matrix(kron(Matrix::Identity(phi.target.dim, phi.target.dim), phi2(l)) * first);
  };
  (void)n;
  return out;
}

FMorphism dual_morphism_F(const FMorphism& phi, const ModuliConfig& cfg) {
  FMorphism out{phi.target.dual(), phi.source.dual(), {}};
  out.phi = [phi, gamma = cfg.gamma](const WeightVector& l) {
    const std::vector<HModule> layout{phi.source};
    const std::vector<int> leg{0};
    return Matrix(apply_dyn_shift([&](const WeightVector& m) { return phi(m); }, layout, leg, l, gamma, +1)
                      .transpose());
  };
  return out;
}

FMorphism exchange_morphism_F(cd w1, cd w2, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const HModule v = tensor(HModule::vector_rep(n), HModule::vector_rep(n));
  return FMorphism{v, v, [w1, w2, cfg, n](const WeightVector& l) {
                     return Matrix(build_RF(w2 - w1, l, cfg) * permutation(n, n));
                   }};
}

double weight_violation(const Matrix& m, const std::vector<WeightKey>& row_weights,
                        const std::vector<WeightKey>& col_weights) {
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (row_weights[static_cast<std::size_t>(i)] != col_weights[static_cast<std::size_t>(j)])
        worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

ResidualReport verify_rf_initial(const ModuliConfig& cfg) {
  const std::string name = "felder.rf_initial";
  ResidualAccumulator acc(name, "R(0,l) = P", cfg.tol);
  SampleConstraints sc;
  const Matrix p = permutation(cfg.n, cfg.n);
  for (auto pt : sample_points(cfg, sc, stream_for(name))) {
    pt.z = 0.0;
    acc.add(pt, build_RF(0.0, pt.lambda, cfg), p);
  }
  return acc.finish();
}

ResidualReport verify_rf_unitarity(const ModuliConfig& cfg) {
  const std::string name = "felder.unitarity";
  ResidualAccumulator acc(name, "R12(z,l) R21(-z,l) = Id", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = {{cfg.gamma}, {-cfg.gamma}};
  const int n = cfg.n;
  const Matrix p = permutation(n, n);
  const Matrix id = Matrix::Identity(n * n, n * n);
  for (const auto& pt : sample_points(cfg, sc, stream_for(name)))
    acc.add(pt, build_RF(pt.z, pt.lambda, cfg) * p * build_RF(-pt.z, pt.lambda, cfg) * p, id);
  return acc.finish();
}

ResidualReport verify_rf_weight_zero(const ModuliConfig& cfg) {
  const std::string name = "felder.weight_zero";
  ResidualAccumulator acc(name, "[h1 + h2, R(z,l)] = 0", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = {{cfg.gamma}};
  const auto wts = weights_of({HModule::vector_rep(cfg.n), HModule::vector_rep(cfg.n)}, cfg.n);
  for (const auto& pt : sample_points(cfg, sc, stream_for(name)))
    acc.add_error(pt, weight_violation(build_RF(pt.z, pt.lambda, cfg), wts, wts), 0.0);
  return acc.finish();
}

ResidualReport verify_alpha_beta_table(const ModuliConfig& cfg) {
  const std::string name = "felder.alpha_beta_monodromy";
  ResidualAccumulator acc(name, "alpha, beta under z -> z+1, z -> z+tau", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = {{cfg.gamma}};
  const double pi = std::numbers::pi;
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const cd l = pt.lambda[0] - pt.lambda[1];
    const auto base = alpha_beta(pt.z, l, cfg);
    const auto one = alpha_beta(pt.z + 1.0, l, cfg);
    const auto tau = alpha_beta(pt.z + cfg.tau, l, cfg);
    acc.add(pt, one.alpha, base.alpha);
    acc.add(pt, one.beta, base.beta);
    acc.add(pt, tau.alpha, std::exp(-2.0 * kI * pi * cfg.gamma) * base.alpha);
    acc.add(pt, tau.beta, std::exp(-2.0 * kI * pi * (cfg.gamma - l)) * base.beta);
  }
  return acc.finish();
}

ResidualReport verify_dqybe(const ModuliConfig& cfg) {
  const std::string name = "felder.dqybe";
  ResidualAccumulator acc(name, "R12(z-w,l-g h3) R13(z,l) R23(w,l-g h1) = R23(w,l) R13(z,l-g h2) R12(z-w,l)",
                          cfg.tol);
  SampleConstraints sc;
  sc.arity = 2;
  sc.z_poles = {{cfg.gamma}};
  sc.w_poles = {{cfg.gamma}};
  sc.diff_poles = {{cfg.gamma}};
  const int n = cfg.n;
  const std::vector<HModule> layout(3, HModule::vector_rep(n));
  const std::vector<Index> dims{n, n, n};
  const std::vector<int> l0{0}, l1{1}, l2{2};
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const auto R = [&](cd u, std::vector<int> legs) {
      return embedded([&cfg, u](const WeightVector& m) { return build_RF(u, m, cfg); }, std::move(legs), dims);
    };
    const auto r12 = R(pt.z - pt.w, {0, 1});
    const auto r13 = R(pt.z, {0, 2});
    const auto r23 = R(pt.w, {1, 2});
    const Matrix lhs = apply_dyn_shift(r12, layout, l2, pt.lambda, cfg.gamma) * r13(pt.lambda) *
                       apply_dyn_shift(r23, layout, l0, pt.lambda, cfg.gamma);
    const Matrix rhs = r23(pt.lambda) * apply_dyn_shift(r13, layout, l1, pt.lambda, cfg.gamma) * r12(pt.lambda);
    acc.add(pt, lhs, rhs);
  }
  return acc.finish();
}

ResidualReport verify_rll_F(const FObject& a, const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "R12(z-w,l-g h3) L13(z,l) L23(w,l-g h1) = L23(w,l) L13(z,l-g h2) R12(z-w,l)",
                          cfg.tol);
  SampleConstraints sc;
  sc.arity = 2;
  sc.z_poles = a.z_poles;
  sc.w_poles = a.z_poles;
  sc.diff_poles = {{cfg.gamma}};
  const int n = cfg.n;
  const HModule v = a.space(n);
  const std::vector<HModule> layout{HModule::vector_rep(n), HModule::vector_rep(n), v};
  const std::vector<Index> dims{n, n, v.dim};
  const std::vector<int> l0{0}, l1{1}, l2{2};
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const auto r12 = embedded([&](const WeightVector& m) { return build_RF(pt.z - pt.w, m, cfg); }, {0, 1}, dims);
    const auto L13 = embedded([&](const WeightVector& m) { return a.L(pt.z, m); }, {0, 2}, dims);
    const auto L23 = embedded([&](const WeightVector& m) { return a.L(pt.w, m); }, {1, 2}, dims);
    const Matrix lhs = apply_dyn_shift(r12, layout, l2, pt.lambda, cfg.gamma) * L13(pt.lambda) *
                       apply_dyn_shift(L23, layout, l0, pt.lambda, cfg.gamma);
    const Matrix rhs = L23(pt.lambda) * apply_dyn_shift(L13, layout, l1, pt.lambda, cfg.gamma) * r12(pt.lambda);
    acc.add(pt, lhs, rhs);
  }
  return acc.finish();
}

ResidualReport verify_weight_zero_F(const FObject& a, const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "[h1 + h2, L(z,l)] = 0", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = a.z_poles;
  const auto wts = weights_of({HModule::vector_rep(cfg.n), a.space(cfg.n)}, cfg.n);
  for (const auto& pt : sample_points(cfg, sc, stream_for(name)))
    acc.add_error(pt, weight_violation(a.L(pt.z, pt.lambda), wts, wts), 0.0);
  return acc.finish();
}

ResidualReport verify_periodicity_F(const FObject& a, const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "L(z, l + n omega_i) = L(z, l)", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = a.z_poles;
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const Matrix base = a.L(pt.z, pt.lambda);
    for (int i = 0; i < cfg.n; ++i) {
      const auto moved = pt.lambda + WeightKey::omega(cfg.n, i).to_vector() * static_cast<double>(cfg.n);
      acc.add(pt, a.L(pt.z, moved), base);
    }
  }
  return acc.finish();
}

ResidualReport morphism_check_F(const FObject& a, const FObject& b, const FMorphism& phi,
                                const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "L'(z,l) (1 x phi(l - g h1)) = (1 x phi(l)) L(z,l)", cfg.tol);
  const int n = cfg.n;
  if (phi.source.dim != a.dim() || phi.target.dim != b.dim()) throw dimension_error("morphism_check_F: shapes");
  SampleConstraints sc;
  sc.z_poles = concat(a.z_poles, b.z_poles);
  const std::vector<HModule> layout{HModule::vector_rep(n), a.space(n)};
  const std::vector<int> aux{0};
  const Matrix id = Matrix::Identity(n, n);
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const Matrix shifted_phi =
        apply_dyn_shift([&](const WeightVector& m) { return kron(id, phi(m)); }, layout, aux, pt.lambda, cfg.gamma);
    const Matrix lhs = b.L(pt.z, pt.lambda) * shifted_phi;
    const Matrix rhs = kron(id, phi(pt.lambda)) * a.L(pt.z, pt.lambda);
    acc.add(pt, lhs, rhs);
  }
  return acc.finish();
}

}  // namespace elq
