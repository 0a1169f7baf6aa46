#include "elq/diff_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <queue>

#include "elq/errors.hpp"
#include "elq/sampling.hpp"
#include "elq/theta.hpp"

namespace elq {

namespace {

std::vector<Lattice> concat(std::vector<Lattice> a, const std::vector<Lattice>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// det S(z - base) vanishes on this lattice.
Lattice s_singular_lattice(cd base, const ModuliConfig& cfg) {
  if (cfg.n % 2 == 0) return {base};
  return {base + 0.5 + 0.5 * cfg.tau};
}

std::vector<int> all_legs(std::size_t count) {
  std::vector<int> legs(count);
  for (std::size_t i = 0; i < count; ++i) legs[i] = static_cast<int>(i);
  return legs;
}

LambdaMatrix sum_of(std::vector<LambdaMatrix> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  return [parts = std::move(parts)](const WeightVector& l) {
    Matrix acc = parts.front()(l);
    for (std::size_t k = 1; k < parts.size(); ++k) acc += parts[k](l);
    return acc;
  };
}

DiffOp::Terms collect(std::map<WeightKey, std::vector<LambdaMatrix>> parts) {
  DiffOp::Terms out;
  for (auto& [k, v] : parts) out.emplace(k, sum_of(std::move(v)));
  return out;
}

void require_compatible(const DiffOp& a, const DiffOp& b, const char* what) {
  if (a.rank() != b.rank() || a.gamma() != b.gamma()) throw domain_error(std::string(what) + ": rank or gamma differ");
}

double largest(const DiffOp::Values& v) {
  double m = 0.0;
  for (const auto& [k, c] : v) m = std::max(m, max_abs(c));
  return m;
}

}  // namespace

DiffOp::DiffOp(Index rows, Index cols, int n, double gamma, Terms terms)
    : rows_(rows), cols_(cols), n_(n), gamma_(gamma), terms_(std::move(terms)) {}

DiffOp DiffOp::multiplication(LambdaMatrix a, Index rows, Index cols, int n, double gamma) {
  Terms t;
  t.emplace(WeightKey::zero(n), std::move(a));
  return DiffOp(rows, cols, n, gamma, std::move(t));
}

DiffOp DiffOp::constant(const Matrix& m, int n, double gamma) {
  return multiplication([m](const WeightVector&) { return m; }, m.rows(), m.cols(), n, gamma);
}

DiffOp DiffOp::identity(Index dim, int n, double gamma) {
  return constant(Matrix::Identity(dim, dim), n, gamma);
}

DiffOp DiffOp::graded_shift(std::span<const WeightKey> keys, int n, double gamma) {
  const auto dim = static_cast<Index>(keys.size());
  std::map<WeightKey, Matrix> proj;
  for (Index b = 0; b < dim; ++b) {
    auto [it, fresh] = proj.try_emplace(keys[static_cast<std::size_t>(b)], Matrix::Zero(dim, dim));
    it->second(b, b) = 1.0;
  }
  Terms t;
  for (auto& [k, m] : proj) t.emplace(k, [m = std::move(m)](const WeightVector&) { return m; });
  return DiffOp(dim, dim, n, gamma, std::move(t));
}

DiffOp DiffOp::shift_exp(int sign, std::span<const HModule> layout, std::span<const int> legs, int n,
                         double gamma) {
  auto keys = leg_weights(layout, legs, n);
  if (sign < 0)
    for (auto& k : keys) k = -k;
  return graded_shift(keys, n, gamma);
}

DiffOp DiffOp::compose(const DiffOp& rhs) const {
  require_compatible(*this, rhs, "compose");
  if (cols_ != rhs.rows_) throw dimension_error("compose: inner dimensions differ");
  std::map<WeightKey, std::vector<LambdaMatrix>> parts;
  const double g = gamma_;
  for (const auto& [mu, a] : terms_)
    for (const auto& [nu, b] : rhs.terms_)
      parts[mu + nu].push_back([a, b, mu, g](const WeightVector& l) { return Matrix(a(l) * b(shifted(l, mu, g))); });
  return DiffOp(rows_, rhs.cols_, n_, gamma_, collect(std::move(parts)));
}

DiffOp DiffOp::operator+(const DiffOp& rhs) const {
  require_compatible(*this, rhs, "add");
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw dimension_error("add: shapes differ");
  std::map<WeightKey, std::vector<LambdaMatrix>> parts;
  for (const auto& [k, a] : terms_) parts[k].push_back(a);
  for (const auto& [k, b] : rhs.terms_) parts[k].push_back(b);
  return DiffOp(rows_, cols_, n_, gamma_, collect(std::move(parts)));
}

DiffOp DiffOp::operator-(const DiffOp& rhs) const { return *this + rhs.scaled(-1.0); }

DiffOp DiffOp::scaled(cd s) const {
  Terms t;
  for (const auto& [k, a] : terms_) t.emplace(k, [a, s](const WeightVector& l) { return Matrix(s * a(l)); });
  return DiffOp(rows_, cols_, n_, gamma_, std::move(t));
}

DiffOp DiffOp::embed(std::vector<int> legs, std::vector<Index> dims) const {
  Index total = 1;
  for (Index d : dims) total *= d;
  Index local = 1;
  for (int leg : legs) local *= dims.at(static_cast<std::size_t>(leg));
  if (rows_ != local || cols_ != local) throw dimension_error("embed: operator does not match its legs");
  Terms t;
  for (const auto& [k, a] : terms_)
    t.emplace(k, [a, legs, dims](const WeightVector& l) { return leg_embed(a(l), legs, dims); });
  return DiffOp(total, total, n_, gamma_, std::move(t));
}

DiffOp::Values DiffOp::eval(const WeightVector& lambda) const {
  Values v;
  for (const auto& [k, a] : terms_) v.emplace(k, a(lambda));
  const double cut = kPruneThreshold * std::max(1.0, largest(v));
  std::erase_if(v, [cut](const auto& kv) { return max_abs(kv.second) < cut; });
  return v;
}

std::set<WeightKey> DiffOp::support(std::span<const WeightVector> grid) const {
  std::set<WeightKey> keys;
  for (const auto& l : grid)
    for (const auto& [k, c] : eval(l)) keys.insert(k);
  return keys;
}

DiffOp DiffOp::pruned(std::span<const WeightVector> grid) const {
  std::map<WeightKey, double> sup;
  double top = 0.0;
  for (const auto& l : grid)
    for (const auto& [k, a] : terms_) {
      const double m = max_abs(a(l));
      sup[k] = std::max(sup[k], m);
      top = std::max(top, m);
    }
  Terms t;
  for (const auto& [k, a] : terms_)
    if (sup[k] >= kPruneThreshold * std::max(1.0, top)) t.emplace(k, a);
  return DiffOp(rows_, cols_, n_, gamma_, std::move(t));
}

Vector DiffOp::apply(const TestFunction& f, const WeightVector& lambda) const {
  Vector out = Vector::Zero(rows_);
  for (const auto& [k, a] : terms_) out += a(lambda) * f(shifted(lambda, k, gamma_));
  return out;
}

DiffOp DiffOp::inverse(std::span<const WeightVector> probes) const {
  if (rows_ != cols_) throw dimension_error("inverse: operator is not square");
  const Index m = rows_;
  std::vector<std::optional<WeightKey>> key(static_cast<std::size_t>(m * m));
  for (const auto& l : probes) {
    const auto v = eval(l);
    const double cut = kPruneThreshold * std::max(1.0, largest(v));
    for (const auto& [k, c] : v)
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
          if (std::abs(c(i, j)) < cut) continue;
          auto& slot = key[static_cast<std::size_t>(i * m + j)];
          if (slot && *slot != k) throw domain_error("inverse: entry carries more than one shift");
          slot = k;
        }
  }
  // r_i + c_j = key(i, j) on the bipartite graph of nonzero entries.
  std::vector<std::optional<WeightKey>> r(static_cast<std::size_t>(m)), c(static_cast<std::size_t>(m));
  for (Index start = 0; start < m; ++start) {
    if (r[static_cast<std::size_t>(start)]) continue;
    r[static_cast<std::size_t>(start)] = WeightKey::zero(n_);
    std::queue<Index> todo;  // rows: i, columns: m + j
    todo.push(start);
    while (!todo.empty()) {
      const Index node = todo.front();
      todo.pop();
      for (Index other = 0; other < m; ++other) {
        const Index i = node < m ? node : other;
        const Index j = node < m ? other : node - m;
        const auto& k = key[static_cast<std::size_t>(i * m + j)];
        if (!k) continue;
        auto& ri = r[static_cast<std::size_t>(i)];
        auto& cj = c[static_cast<std::size_t>(j)];
        if (node < m && !cj) {
          cj = *k - *ri;
          todo.push(m + j);
        } else if (node >= m && !ri) {
          ri = *k - *cj;
          todo.push(i);
        }
        if (*ri + *cj != *k) throw domain_error("inverse: shifts are not graded by row and column");
      }
    }
  }
  std::vector<WeightKey> rk(static_cast<std::size_t>(m)), ck(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    rk[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)].value_or(WeightKey::zero(n_));
    ck[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)].value_or(WeightKey::zero(n_));
  }
  const Terms terms = terms_;
  const double g = gamma_;
  // D = G_r A G_c with G_k = sum E_ii T_{k_i} and A_ij(l) = D_ij(l - g r_i).
  LambdaMatrix a_inv = [terms, rk, g, m](const WeightVector& l) {
    Matrix a(m, m);
    for (Index i = 0; i < m; ++i) {
      const auto at = shifted(l, -rk[static_cast<std::size_t>(i)], g);
      Matrix total = Matrix::Zero(m, m);
      for (const auto& [k, coef] : terms) total += coef(at);
      a.row(i) = total.row(i);
    }
    return checked_inverse(a, 1e-12);
  };
  std::vector<WeightKey> neg_r, neg_c;
  for (const auto& k : rk) neg_r.push_back(-k);
  for (const auto& k : ck) neg_c.push_back(-k);
  return graded_shift(neg_c, n_, gamma_) * multiplication(a_inv, m, m, n_, gamma_) * graded_shift(neg_r, n_, gamma_);
}

DiffOpDistance diffop_distance(const DiffOp& a, const DiffOp& b, const WeightVector& lambda) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw dimension_error("diffop_distance: shapes differ");
  const auto va = a.eval(lambda);
  const auto vb = b.eval(lambda);
  DiffOpDistance d;
  for (const auto& [k, m] : va) {
    const auto it = vb.find(k);
    d.abs = std::max(d.abs, it == vb.end() ? max_abs(m) : max_abs(m - it->second));
  }
  for (const auto& [k, m] : vb) {
    d.scale = std::max(d.scale, max_abs(m));
    if (!va.contains(k)) d.abs = std::max(d.abs, max_abs(m));
  }
  return d;
}

Index DBObject::dim() const {
  Index d = 1;
  for (const auto& f : factors) d *= f.dim;
  return d;
}

DBObject twist_with(const FObject& a, SFunction s, SFunction s2, std::vector<Lattice> s2_singular,
                    const ModuliConfig& cfg) {
  const int n = cfg.n;
  const double g = cfg.gamma;
  const std::vector<HModule> layout{HModule::vector_rep(n), a.space(n)};
  const std::vector<Index> dims{n, a.dim()};
  auto L = [a, s, s2, layout, dims, n, g](cd z) {
    const Index d = dims[0] * dims[1];
    const std::vector<int> aux{0}, rest{1};
    auto s_shift = [s, layout, dims, aux, rest, g, z](const WeightVector& l) {
      return apply_dyn_shift([&](const WeightVector& m) { return leg_embed(s(z, m), aux, dims); }, layout, rest, l, g);
    };
    auto s2_inv = [s2, dims, aux, z](const WeightVector& l) { return leg_embed(checked_inverse(s2(z, l)), aux, dims); };
    auto lz = [a, z](const WeightVector& l) { return a.L(z, l); };
    return DiffOp::multiplication(s_shift, d, d, n, g) * DiffOp::multiplication(lz, d, d, n, g) *
           DiffOp::shift_exp(-1, layout, aux, n, g) * DiffOp::multiplication(s2_inv, d, d, n, g);
  };
  return DBObject{a.factors, L, concat(a.z_poles, s2_singular)};
}

DBObject twist(const FObject& a, const SMatrixEvaluator& s, const SMatrixEvaluator& s2, const ModuliConfig& cfg) {
  return twist_with(
      a, [s, cfg](cd z, const WeightVector& l) { return s(z, l, cfg); },
      [s2, cfg](cd z, const WeightVector& l) { return s2(z, l, cfg); }, {s_singular_lattice(s2.base_point, cfg)}, cfg);
}

DBObject functor_F(const FObject& a, const ModuliConfig& cfg) {
  return twist(a, SMatrixEvaluator{cfg.x}, SMatrixEvaluator{cfg.x + cfg.c}, cfg);
}

DBObject icx_object(const ModuliConfig& cfg) { return functor_F(trivial_F(cfg), cfg); }

DBObject functor_H(const BObject& b, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const DBObject icx = icx_object(cfg);
  const std::vector<Index> dims{n, b.dim()};
  auto L = [icx, b, dims, cfg](cd z) {
    return icx.L(z).embed({0}, dims) * DiffOp::constant(b.L(z), cfg.n, cfg.gamma);
  };
  return DBObject{b.factors, L, concat(b.z_poles, icx.z_poles)};
}

Matrix lemma_T(cd z, cd w, const WeightVector& lambda, const SMatrixEvaluator& s, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const std::vector<HModule> layout(2, HModule::vector_rep(n));
  const std::vector<Index> dims{n, n};
  const std::vector<int> l0{0}, l1{1};
  const auto s1 = [&](cd u) { return [&, u](const WeightVector& m) { return leg_embed(s(u, m, cfg), l0, dims); }; };
  const auto s2 = [&](cd u) { return [&, u](const WeightVector& m) { return leg_embed(s(u, m, cfg), l1, dims); }; };
  return s2(w)(lambda) * apply_dyn_shift(s1(z), layout, l1, lambda, cfg.gamma) * build_RF(z - w, lambda, cfg) *
         checked_inverse(apply_dyn_shift(s2(w), layout, l0, lambda, cfg.gamma)) * checked_inverse(s1(z)(lambda));
}

Matrix lemma_T_prime(cd z, cd w, const WeightVector& lambda, const SMatrixEvaluator& s2, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const std::vector<HModule> layout(2, HModule::vector_rep(n));
  const std::vector<Index> dims{n, n};
  const std::vector<int> l0{0}, l1{1};
  const auto f1 = [&](cd u) { return [&, u](const WeightVector& m) { return leg_embed(s2(u, m, cfg), l0, dims); }; };
  const auto f2 = [&](cd u) { return [&, u](const WeightVector& m) { return leg_embed(s2(u, m, cfg), l1, dims); }; };
  return f1(z)(lambda) * apply_dyn_shift(f2(w), layout, l0, lambda, cfg.gamma, +1) * build_RF(z - w, lambda, cfg) *
         checked_inverse(apply_dyn_shift(f1(z), layout, l1, lambda, cfg.gamma, +1)) * checked_inverse(f2(w)(lambda));
}

ResidualReport verify_lemma1(const FObject& a, const SMatrixEvaluator& s, const SMatrixEvaluator& s2,
                             const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "T12(z,w,l-g h3) L13(z) L23(w) = L23(w) L13(z) T'12(z,w,l), L = S1(z,l-g h2) L e^{-g D1} S'1(z,l)^{-1}",
                          cfg.tol);
  const int n = cfg.n;
  const double g = cfg.gamma;
  const DBObject db = twist(a, s, s2, cfg);
  SampleConstraints sc;
  sc.arity = 2;
  sc.z_poles = concat(db.z_poles, {s_singular_lattice(s.base_point, cfg)});
  sc.w_poles = sc.z_poles;
  sc.diff_poles = {{g}};
  const std::vector<HModule> layout{HModule::vector_rep(n), HModule::vector_rep(n), a.space(n)};
  const std::vector<Index> dims{n, n, a.dim()};
  const Index d = n * n * a.dim();
  const std::vector<int> pair{0, 1}, last{2};
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const auto L13 = db.L(pt.z).embed({0, 2}, dims);
    const auto L23 = db.L(pt.w).embed({1, 2}, dims);
    auto t = [&](const WeightVector& l) {
      return apply_dyn_shift(
          [&](const WeightVector& m) { return leg_embed(lemma_T(pt.z, pt.w, m, s, cfg), pair, dims); }, layout, last, l,
          g);
    };
    auto tp = [&](const WeightVector& l) { return leg_embed(lemma_T_prime(pt.z, pt.w, l, s2, cfg), pair, dims); };
    const auto lhs = DiffOp::multiplication(t, d, d, n, g) * L13 * L23;
    const auto rhs = L23 * L13 * DiffOp::multiplication(tp, d, d, n, g);
    const auto dist = diffop_distance(lhs, rhs, pt.lambda);
    acc.add_error(pt, dist.abs, dist.scale);
  }
  return acc.finish();
}

ResidualReport verify_rll_DB(const DBObject& a, const BelavinR& rb, const std::string& name) {
  const ModuliConfig& cfg = rb.config();
  ResidualAccumulator acc(name, "R12(z-w) L13(z) L23(w) = L23(w) L13(z) R12(z-w)", cfg.tol);
  const int n = cfg.n;
  SampleConstraints sc;
  sc.arity = 2;
  sc.z_poles = a.z_poles;
  sc.w_poles = a.z_poles;
  sc.diff_poles = {{cfg.gamma}};
  const std::vector<Index> dims{n, n, a.dim()};
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const auto r12 = DiffOp::constant(leg_embed(rb(pt.z - pt.w), std::vector<int>{0, 1}, dims), n, cfg.gamma);
    const auto L13 = a.L(pt.z).embed({0, 2}, dims);
    const auto L23 = a.L(pt.w).embed({1, 2}, dims);
    const auto dist = diffop_distance(r12 * L13 * L23, L23 * L13 * r12, pt.lambda);
    acc.add_error(pt, dist.abs, dist.scale);
  }
  return acc.finish();
}

ResidualReport morphism_check_DB(const DBObject& a, const DBObject& b, const DiffOp& psi, const ModuliConfig& cfg,
                                 const std::string& name) {
  ResidualAccumulator acc(name, "(1 x psi) L_a(z) = L_b(z) (1 x psi)", cfg.tol);
  if (a.dim() != b.dim() || psi.rows() != b.dim() || psi.cols() != a.dim())
    throw dimension_error("morphism_check_DB: shapes");
  SampleConstraints sc;
  sc.z_poles = concat(a.z_poles, b.z_poles);
  const auto lifted = psi.embed({1}, {cfg.n, a.dim()});
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const auto dist = diffop_distance(lifted * a.L(pt.z), b.L(pt.z) * lifted, pt.lambda);
    acc.add_error(pt, dist.abs, dist.scale);
  }
  return acc.finish();
}

DiffOp tilde_S(const LambdaMatrix& s, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const std::vector<HModule> layout{HModule::vector_rep(n)};
  const std::vector<int> leg{0};
  return DiffOp::shift_exp(-1, layout, leg, n, cfg.gamma) * DiffOp::multiplication(s, n, n, n, cfg.gamma) *
         DiffOp::shift_exp(+1, layout, leg, n, cfg.gamma);
}

DiffOp tilde_S_closed(const LambdaMatrix& s, const ModuliConfig& cfg) {
  const int n = cfg.n;
  const double g = cfg.gamma;
  std::map<WeightKey, std::vector<LambdaMatrix>> parts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const WeightKey wi = WeightKey::omega(n, i);
      parts[WeightKey::omega(n, j) - wi].push_back([s, wi, g, i, j, n](const WeightVector& l) {
        Matrix e = Matrix::Zero(n, n);
        e(i, j) = s(shifted(l, -wi, g))(i, j);
        return e;
      });
    }
  return DiffOp(n, n, n, g, collect(std::move(parts)));
}

namespace {

cd checked_argument(cd w, const ModuliConfig& cfg) {
  const cd u = w - cfg.x - cfg.c;
  if (lattice_distance(u, 0.0, cfg.tau) < cfg.pole_delta)
    throw singularity_error("intertwiner: w - x - c lies on Z + tau Z");
  return u;
}

LambdaMatrix s_inverse_at(cd u, const ModuliConfig& cfg) {
  return [u, cfg](const WeightVector& l) { return checked_inverse(build_S(u, l, cfg), 1e-12); };
}

}  // namespace

DiffOp prop4_intertwiner(cd w, const ModuliConfig& cfg) {
  const cd u = checked_argument(w, cfg);
  const int n = cfg.n;
  const std::vector<HModule> layout{HModule::vector_rep(n)};
  const std::vector<int> leg{0};
  return DiffOp::shift_exp(-1, layout, leg, n, cfg.gamma) *
         DiffOp::multiplication(s_inverse_at(u, cfg), n, n, n, cfg.gamma);
}

DiffOp prop4_conjugation_reading(cd w, const ModuliConfig& cfg) {
  return tilde_S(s_inverse_at(checked_argument(w, cfg), cfg), cfg);
}

DiffOp prop4_pointwise_reading(cd w, const ModuliConfig& cfg) {
  return DiffOp::multiplication(s_inverse_at(checked_argument(w, cfg), cfg), cfg.n, cfg.n, cfg.n, cfg.gamma);
}

DiffOp canonical_intertwiner(std::span<const cd> ws, const ModuliConfig& cfg) {
  if (ws.empty()) throw domain_error("canonical_intertwiner: no points");
  const int n = cfg.n;
  const double g = cfg.gamma;
  const std::vector<HModule> layout(ws.size(), HModule::vector_rep(n));
  const std::vector<Index> dims(ws.size(), n);
  std::vector<LambdaMatrix> factors;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const std::vector<int> leg{static_cast<int>(k)};
    factors.push_back(embedded(s_inverse_at(checked_argument(ws[k], cfg), cfg), leg, dims));
  }
  auto product = [factors, layout, g](const WeightVector& l) {
    Matrix acc = factors.front()(l);
    for (std::size_t k = 1; k < factors.size(); ++k) {
      const auto earlier = all_legs(k);
      acc = apply_dyn_shift(factors[k], layout, earlier, l, g, +1) * acc;
    }
    return acc;
  };
  Index d = 1;
  for (Index x : dims) d *= x;
  return DiffOp::shift_exp(-1, layout, all_legs(ws.size()), n, g) * DiffOp::multiplication(product, d, d, n, g);
}

DiffOp tensor_intertwiners(const DiffOp& psi1, const DiffOp& psi2) {
  const std::vector<Index> dims{psi1.rows(), psi2.rows()};
  return psi2.embed({1}, dims) * psi1.embed({0}, dims);
}

double proportionality_spread(const DiffOp& a, const DiffOp& b, std::span<const WeightVector> grid) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<cd> ratios;
  for (const auto& l : grid) {
    const auto va = a.eval(l);
    const auto vb = b.eval(l);
    if (va.size() != vb.size()) return kInf;
    const double top = largest(vb);
    for (const auto& [k, mb] : vb) {
      const auto it = va.find(k);
      if (it == va.end()) return kInf;
      for (Index i = 0; i < mb.rows(); ++i)
        for (Index j = 0; j < mb.cols(); ++j)
          if (std::abs(mb(i, j)) > 1e-8 * top) ratios.push_back(it->second(i, j) / mb(i, j));
    }
  }
  if (ratios.empty()) return kInf;
  cd mean = 0.0;
  for (cd r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (cd r : ratios) var += std::norm(r - mean);
  return std::sqrt(var / static_cast<double>(ratios.size()));
}

FObject tensor_vector_F(std::span<const cd> ws, const ModuliConfig& cfg) {
  FObject out = vector_rep_F(ws.front(), true, cfg);
  for (std::size_t k = 1; k < ws.size(); ++k) out = tensor_F(out, vector_rep_F(ws[k], true, cfg), cfg);
  return out;
}

BObject tensor_vector_B(std::span<const cd> ws, const BelavinR& rb) {
  BObject out = vector_rep_B(ws.front(), rb);
  for (std::size_t k = 1; k < ws.size(); ++k) out = tensor_B(out, vector_rep_B(ws[k], rb), rb.config());
  return out;
}

ResidualReport verify_icx_structure(const ModuliConfig& cfg) {
  const std::string name = "functors.icx_structure";
  ResidualAccumulator acc(name, "I(z) = sum_k S(z-x,l) E_kk S(z-x-c,l-g w_k)^{-1} T_{-w_k}, every entry on every k",
                          cfg.tol);
  const int n = cfg.n;
  const DBObject icx = icx_object(cfg);
  SampleConstraints sc;
  sc.z_poles = icx.z_poles;
  std::set<WeightKey> allowed;
  for (int k = 0; k < n; ++k) allowed.insert(-WeightKey::omega(n, k));
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const auto v = icx.L(pt.z).eval(pt.lambda);
    double violation = 0.0;
    for (const auto& [k, m] : v)
      if (!allowed.contains(k)) violation = std::max(violation, max_abs(m));
    const double cut = 1e-10 * std::max(1.0, largest(v));
    for (const auto& k : allowed) {
      const auto it = v.find(k);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          if (it == v.end() || std::abs(it->second(i, j)) < cut) violation = std::numeric_limits<double>::infinity();
    }
    acc.add_error(pt, violation, 0.0);
  }
  return acc.finish();
}

ResidualReport verify_twist_support(const FObject& a, const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "support of L^{S,S'}(z) in {-omega_1, ..., -omega_n}", cfg.tol);
  const int n = cfg.n;
  const DBObject db = functor_F(a, cfg);
  SampleConstraints sc;
  sc.z_poles = db.z_poles;
  std::set<WeightKey> allowed;
  for (int k = 0; k < n; ++k) allowed.insert(-WeightKey::omega(n, k));
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    double violation = 0.0;
    for (const auto& [k, m] : db.L(pt.z).eval(pt.lambda))
      if (!allowed.contains(k)) violation = std::max(violation, max_abs(m));
    acc.add_error(pt, violation, 0.0);
  }
  return acc.finish();
}

namespace {

// Random operator sum_k M_k exp(<a_k, l>) T_{mu_k} on C^dim.
DiffOp random_diffop(std::mt19937_64& eng, Index dim, int n, double gamma) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> coef(-1, 1);
  const auto rc = [&] { return cd(u(eng), u(eng)); };
  std::map<WeightKey, std::vector<LambdaMatrix>> parts;
  for (int t = 0; t < 3; ++t) {
    std::vector<int> a(static_cast<std::size_t>(n));
    for (auto& x : a) x = coef(eng);
    Matrix m(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) m(i, j) = rc();
    std::vector<cd> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = rc();
    parts[WeightKey(a)].push_back([m, w](const WeightVector& l) {
      cd e = 0.0;
      for (int i = 0; i < l.rank(); ++i) e += w[static_cast<std::size_t>(i)] * l[i];
      return Matrix(std::exp(e) * m);
    });
  }
  return DiffOp(dim, dim, n, gamma, collect(std::move(parts)));
}

DiffOp::TestFunction random_test_function(std::mt19937_64& eng, Index dim, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(dim), p(dim);
  for (Index i = 0; i < dim; ++i) {
    v(i) = cd(u(eng), u(eng));
    p(i) = cd(u(eng), u(eng));
  }
  std::vector<cd> w(static_cast<std::size_t>(n));
  for (auto& x : w) x = cd(u(eng), u(eng));
  return [v, p, w](const WeightVector& l) {
    cd e = 0.0;
    for (int i = 0; i < l.rank(); ++i) e += w[static_cast<std::size_t>(i)] * l[i];
    return Vector(std::exp(e) * v + std::sin(l[0]) * p);
  };
}

}  // namespace

ResidualReport verify_composition_oracle(const ModuliConfig& cfg) {
  const std::string name = "diff.composition_oracle";
  ResidualAccumulator acc(name, "(D D') f = D (D' f)", cfg.tol);
  SampleConstraints sc;
  const auto stream = stream_for(name);
  const auto pts = sample_points(cfg, sc, stream);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto eng = sample_engine(cfg.seed, stream + 1, i);
    const auto d1 = random_diffop(eng, 3, cfg.n, cfg.gamma);
    const auto d2 = random_diffop(eng, 3, cfg.n, cfg.gamma);
    const auto f = random_test_function(eng, 3, cfg.n);
    const Vector lhs = (d1 * d2).apply(f, pts[i].lambda);
    const Vector rhs = d1.apply([&](const WeightVector& l) { return d2.apply(f, l); }, pts[i].lambda);
    acc.add(pts[i], Matrix(lhs), Matrix(rhs));
  }
  return acc.finish();
}

ResidualReport verify_composition_associative(const ModuliConfig& cfg) {
  const std::string name = "diff.associativity";
  ResidualAccumulator acc(name, "(D D') D'' = D (D' D'')", cfg.tol);
  SampleConstraints sc;
  const auto stream = stream_for(name);
  const auto pts = sample_points(cfg, sc, stream);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto eng = sample_engine(cfg.seed, stream + 1, i);
    const auto a = random_diffop(eng, 3, cfg.n, cfg.gamma);
    const auto b = random_diffop(eng, 3, cfg.n, cfg.gamma);
    const auto c = random_diffop(eng, 3, cfg.n, cfg.gamma);
    const auto dist = diffop_distance((a * b) * c, a * (b * c), pts[i].lambda);
    acc.add_error(pts[i], dist.abs, dist.scale);
  }
  return acc.finish();
}

ResidualReport verify_tilde_S(const ModuliConfig& cfg) {
  const std::string name = "intertwiners.tilde_S";
  ResidualAccumulator acc(name, "e^{-g D} S e^{g D} = sum_ij S_ij(z, l - g w_i) E_ij T_{w_j - w_i}", cfg.tol);
  SampleConstraints sc;
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const LambdaMatrix s = [z = pt.z, cfg](const WeightVector& l) { return build_S(z, l, cfg); };
    const auto dist = diffop_distance(tilde_S(s, cfg), tilde_S_closed(s, cfg), pt.lambda);
    acc.add_error(pt, dist.abs, dist.scale);
  }
  return acc.finish();
}

namespace {

void add_morphism_samples(ResidualAccumulator& acc, const DBObject& a, const DBObject& b, const DiffOp& psi,
                          const ModuliConfig& cfg, std::uint64_t stream, int count) {
  SampleConstraints sc;
  sc.z_poles = concat(a.z_poles, b.z_poles);
  const auto lifted = psi.embed({1}, {cfg.n, a.dim()});
  for (const auto& pt : sample_points(cfg, sc, stream, count)) {
    const auto dist = diffop_distance(lifted * a.L(pt.z), b.L(pt.z) * lifted, pt.lambda);
    acc.add_error(pt, dist.abs, dist.scale);
  }
}

int per_point_samples(const ModuliConfig& cfg) {
  const int k = static_cast<int>(cfg.ws.size());
  return std::max(1, (cfg.samples + k - 1) / k);
}

}  // namespace

ResidualReport verify_prop4(const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "psi = e^{-g D} S(w-x-c,l)^{-1}: (1 x psi) H(V_B(w)) = F(V~_F(w)) (1 x psi)", cfg.tol);
  const BelavinR rb(cfg);
  const auto stream = stream_for(name);
  for (std::size_t k = 0; k < cfg.ws.size(); ++k) {
    const cd w = cfg.ws[k];
    DiffOp psi = name.ends_with(".conjugation") ? prop4_conjugation_reading(w, cfg)
                 : name.ends_with(".pointwise") ? prop4_pointwise_reading(w, cfg)
                                                : prop4_intertwiner(w, cfg);
    add_morphism_samples(acc, functor_H(vector_rep_B(w, rb), cfg), functor_F(vector_rep_F(w, true, cfg), cfg), psi, cfg,
                         stream + k, per_point_samples(cfg));
  }
  return acc.finish();
}

ResidualReport verify_prop4_inverse(const ModuliConfig& cfg) {
  const std::string name = "intertwiners.prop4_inverse";
  ResidualAccumulator acc(name, "psi psi^{-1} = psi^{-1} psi = id", cfg.tol);
  const auto stream = stream_for(name);
  SampleConstraints sc;
  const auto id = DiffOp::identity(cfg.n, cfg.n, cfg.gamma);
  for (std::size_t k = 0; k < cfg.ws.size(); ++k) {
    const auto psi = prop4_intertwiner(cfg.ws[k], cfg);
    const auto probes = sample_points(cfg, sc, stream + 1000 + k, 3);
    std::vector<WeightVector> grid;
    for (const auto& p : probes) grid.push_back(p.lambda);
    const auto inv = psi.inverse(grid);
    for (const auto& pt : sample_points(cfg, sc, stream + k, per_point_samples(cfg))) {
      const auto d1 = diffop_distance(psi * inv, id, pt.lambda);
      const auto d2 = diffop_distance(inv * psi, id, pt.lambda);
      acc.add_error(pt, std::max(d1.abs, d2.abs), 1.0);
    }
  }
  return acc.finish();
}

ResidualReport verify_canonical(const ModuliConfig& cfg, int r, const std::string& name) {
  ResidualAccumulator acc(name, "(1 x phi_{1..r}) H(V_B(w_1) x ... x V_B(w_r)) = F(V~_F(w_1) x ... x V~_F(w_r)) (1 x phi_{1..r})",
                          cfg.tol);
  if (r < 1 || static_cast<std::size_t>(r) > cfg.ws.size()) throw config_error("canonical check needs r points in ws");
  const BelavinR rb(cfg);
  const std::span<const cd> ws(cfg.ws.data(), static_cast<std::size_t>(r));
  add_morphism_samples(acc, functor_H(tensor_vector_B(ws, rb), cfg), functor_F(tensor_vector_F(ws, cfg), cfg),
                       canonical_intertwiner(ws, cfg), cfg, stream_for(name), 0);
  return acc.finish();
}

ResidualReport verify_tensor_proportional(const ModuliConfig& cfg) {
  const std::string name = "intertwiners.tensor_vs_canonical";
  ResidualAccumulator acc(name, "psi_2 o psi_1 proportional to phi_12 (std of entrywise ratios)", cfg.tol);
  if (cfg.ws.size() < 2) throw config_error("tensor check needs two points in ws");
  const std::span<const cd> ws(cfg.ws.data(), 2);
  const auto chain = tensor_intertwiners(prop4_intertwiner(ws[0], cfg), prop4_intertwiner(ws[1], cfg));
  const auto closed = canonical_intertwiner(ws, cfg);
  SampleConstraints sc;
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const std::vector<WeightVector> grid{pt.lambda};
    acc.add_error(pt, proportionality_spread(chain, closed, grid), 0.0);
  }
  return acc.finish();
}

ResidualReport verify_functoriality(const ModuliConfig& cfg) {
  const std::string name = "functors.functoriality";
  ResidualAccumulator acc(name, "(1 x phi) F(V1 x V2) = F(V2 x V1) (1 x phi), phi = R^F(w2-w1,l) P", cfg.tol);
  if (cfg.ws.size() < 2) throw config_error("functoriality check needs two points in ws");
  const cd w1 = cfg.ws[0], w2 = cfg.ws[1];
  const FObject v1 = vector_rep_F(w1, false, cfg), v2 = vector_rep_F(w2, false, cfg);
  const FMorphism phi = exchange_morphism_F(w1, w2, cfg);
  const Index d = cfg.n * cfg.n;
  const auto op = DiffOp::multiplication([phi](const WeightVector& l) { return phi(l); }, d, d, cfg.n, cfg.gamma);
  add_morphism_samples(acc, functor_F(tensor_F(v1, v2, cfg), cfg), functor_F(tensor_F(v2, v1, cfg), cfg), op, cfg,
                       stream_for(name), 0);
  return acc.finish();
}

}  // namespace elq
