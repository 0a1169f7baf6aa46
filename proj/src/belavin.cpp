#include "elq/belavin.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>

#include "elq/errors.hpp"
#include "elq/felder.hpp"
#include "elq/sampling.hpp"
#include "elq/theta.hpp"
#include "elq/vertex_irf.hpp"

namespace elq {

namespace {

const cd kI{0.0, 1.0};

Matrix rb_once(cd z, const ModuliConfig& cfg, const WeightVector& lam, cd w0) {
  const int n = cfg.n;
  const std::vector<HModule> layout(2, HModule::vector_rep(n));
  const std::vector<Index> dims{n, n};
  const std::vector<int> leg0{0}, leg1{1};
  const auto s1 = embedded([&cfg, u = z + w0](const WeightVector& l) { return build_S(u, l, cfg); }, {0}, dims);
  const auto s2 = embedded([&cfg, w0](const WeightVector& l) { return build_S(w0, l, cfg); }, {1}, dims);
  const Matrix right = s2(lam) * apply_dyn_shift(s1, layout, leg1, lam, cfg.gamma, -1) * build_RF(z, lam, cfg);
  const Matrix left = s1(lam) * apply_dyn_shift(s2, layout, leg0, lam, cfg.gamma, -1);
  return right * checked_inverse(left, 1e-10);
}

}  // namespace

Matrix build_RB(cd z, const ModuliConfig& cfg, const WeightVector& lambda_ref, cd w0) {
  const cd step{0.0371, 0.0253};
  for (int attempt = 0;; ++attempt) {
    const cd w = w0 + static_cast<double>(attempt) * step;
    try {
      return rb_once(z, cfg, lambda_ref, w);
    } catch (const singularity_error&) {
      if (attempt >= 4) throw;
    }
  }
}

std::pair<WeightVector, cd> belavin_reference(const ModuliConfig& cfg, std::uint64_t k) {
  return reference_from_stream(cfg, streams::kBelavinReference, k);
}

std::pair<WeightVector, cd> reference_from_stream(const ModuliConfig& cfg, std::uint64_t stream, std::uint64_t k) {
  // w0 stays near the origin: the conditioning of S(u, l) degrades like exp(c |Im u|).
  auto eng = sample_engine(cfg.seed, stream, 2 * k);
  std::uniform_real_distribution<double> ua(-0.5, 0.5), ub(-0.3, 0.3);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double a = ua(eng);
    const double b = ub(eng);
    const cd w0 = a + b * cfg.tau;
    if (lattice_distance(w0, 0.0, cfg.tau) >= 0.2) return {sample_lambda(cfg, stream, 2 * k + 1), w0};
  }
  throw convergence_error("belavin_reference: rejection budget exceeded");
}

BelavinR::BelavinR(const ModuliConfig& cfg) : cfg_(cfg) {
  auto [l, w] = belavin_reference(cfg, 0);
  lambda_ref_ = std::move(l);
  w0_ = w;
}

BelavinR::BelavinR(const ModuliConfig& cfg, WeightVector lambda_ref, cd w0)
    : cfg_(cfg), lambda_ref_(std::move(lambda_ref)), w0_(w0) {}

Matrix BelavinR::operator()(cd z) const {
  const std::pair<double, double> key{z.real(), z.imag()};
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Matrix value = build_RB(z, cfg_, lambda_ref_, w0_);
  std::unique_lock lock(mutex_);
  return cache_.try_emplace(key, std::move(value)).first->second;
}

std::size_t BelavinR::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

Index BObject::dim() const {
  Index d = 1;
  for (const auto& f : factors) d *= f.dim;
  return d;
}

BObject trivial_B(const ModuliConfig& cfg) {
  const int n = cfg.n;
  return BObject{{HModule::trivial(n)}, [n](cd) { return Matrix(Matrix::Identity(n, n)); }, {}};
}

BObject vector_rep_B(cd w, const BelavinR& rb) {
  const ModuliConfig& cfg = rb.config();
  return BObject{{HModule::vector_rep(cfg.n)},
                 [w, &rb](cd z) { return Matrix(chi(z - w, rb.config()) * rb(z - w)); },
                 {{w}, {w + cfg.gamma}, {w - cfg.gamma}, {w + (1.0 - 1.0 / cfg.n) * cfg.gamma}}};
}

BObject vector_rep_B_literal(cd w, const BelavinR& rb) {
  const ModuliConfig& cfg = rb.config();
  return BObject{{HModule::vector_rep(cfg.n)},
                 [w, &rb](cd z) { return Matrix(chi(z, rb.config()) * rb(z - w)); },
                 {{0.0}, {w + cfg.gamma}, {w - cfg.gamma}, {(1.0 - 1.0 / cfg.n) * cfg.gamma}}};
}

BObject tensor_B(const BObject& a, const BObject& b, const ModuliConfig& cfg) {
  const int n = cfg.n;
  BObject o;
  o.factors = a.factors;
  o.factors.insert(o.factors.end(), b.factors.begin(), b.factors.end());
  o.z_poles = a.z_poles;
  o.z_poles.insert(o.z_poles.end(), b.z_poles.begin(), b.z_poles.end());
  const std::vector<Index> dims{n, a.dim(), b.dim()};
  o.L = [la = a.L, lb = b.L, dims](cd z) {
    const std::vector<int> l01{0, 1}, l02{0, 2};
    return Matrix(leg_embed(la(z), l01, dims) * leg_embed(lb(z), l02, dims));
  };
  return o;
}

BObject dual_B(const BObject& a, const ModuliConfig& cfg) {
  BObject o;
  o.factors = {a.space(cfg.n).dual()};
  o.z_poles = a.z_poles;
  o.L = [la = a.L, n = cfg.n, d = a.dim()](cd z) { return partial_transpose_second(checked_inverse(la(z)), n, d); };
  return o;
}

ResidualReport verify_rb_reference_independence(const ModuliConfig& cfg, int references) {
  const std::string name = "belavin.reference_independence";
  ResidualAccumulator acc(name, "R(z) independent of the reference lambda and w0", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = {{cfg.gamma}};
  sc.with_lambda = false;
  std::deque<BelavinR> refs;
  // references drawn from the check's own stream, disjoint from the default reference
  for (int k = 0; k < references; ++k) {
    auto [l, w0] = reference_from_stream(cfg, stream_for(name) ^ 0x5a5a, static_cast<std::uint64_t>(k));
    refs.emplace_back(cfg, std::move(l), w0);
  }
  const BelavinR base(cfg);
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const Matrix r0 = base(pt.z);
    for (const auto& r : refs) acc.add(pt, r(pt.z), r0);
  }
  return acc.finish();
}

namespace {

SampleConstraints one_point(const ModuliConfig& cfg) {
  SampleConstraints sc;
  sc.z_poles = {{cfg.gamma}, {-cfg.gamma}};
  sc.with_lambda = false;
  return sc;
}

}  // namespace

ResidualReport verify_rb_unitarity(const BelavinR& rb) {
  const auto& cfg = rb.config();
  const std::string name = "belavin.unitarity";
  ResidualAccumulator acc(name, "R(z) R21(-z) = 1", cfg.tol);
  const int n = cfg.n;
  const Matrix p = permutation(n, n);
  const Matrix id = Matrix::Identity(n * n, n * n);
  for (const auto& pt : sample_points(cfg, one_point(cfg), stream_for(name)))
    acc.add(pt, rb(pt.z) * p * rb(-pt.z) * p, id);
  return acc.finish();
}

ResidualReport verify_rb_initial(const BelavinR& rb) {
  const auto& cfg = rb.config();
  ResidualAccumulator acc("belavin.initial", "R(0) = P", cfg.tol);
  SamplePoint pt;
  pt.lambda = rb.lambda_ref();
  acc.add(pt, rb(0.0), permutation(cfg.n, cfg.n));
  return acc.finish();
}

ResidualReport verify_rb_translation_one(const BelavinR& rb) {
  const auto& cfg = rb.config();
  const std::string name = "belavin.translation_one";
  ResidualAccumulator acc(name, "R(z+1) = A1 R(z) A1^-1 = A2^-1 R(z) A2", cfg.tol);
  const int n = cfg.n;
  const auto [A, B] = heisenberg_A_B(n);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix ai = checked_inverse(A);
  for (const auto& pt : sample_points(cfg, one_point(cfg), stream_for(name))) {
    const Matrix r = rb(pt.z), moved = rb(pt.z + 1.0);
    acc.add(pt, moved, kron(A, id) * r * kron(ai, id));
    acc.add(pt, moved, kron(id, ai) * r * kron(id, A));
  }
  return acc.finish();
}

ResidualReport verify_rb_translation_tau(const BelavinR& rb) {
  const auto& cfg = rb.config();
  const std::string name = "belavin.translation_tau";
  ResidualAccumulator acc(name, "R(z+tau) = e^{-2 i pi (n-1) g/n} B1 R B1^-1 = e^{-2 i pi (n-1) g/n} B2^-1 R B2",
                          cfg.tol);
  const int n = cfg.n;
  const auto [A, B] = heisenberg_A_B(n);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix bi = checked_inverse(B);
  const cd f = std::exp(-2.0 * kI * std::numbers::pi * static_cast<double>(n - 1) * cfg.gamma / static_cast<double>(n));
  for (const auto& pt : sample_points(cfg, one_point(cfg), stream_for(name))) {
    const Matrix r = rb(pt.z), moved = rb(pt.z + cfg.tau);
    acc.add(pt, moved, f * kron(B, id) * r * kron(bi, id));
    acc.add(pt, moved, f * kron(id, bi) * r * kron(id, B));
  }
  return acc.finish();
}

ResidualReport verify_rb_heisenberg(const BelavinR& rb) {
  const auto& cfg = rb.config();
  const std::string name = "belavin.heisenberg";
  ResidualAccumulator acc(name, "[R(z), A x A] = [R(z), B x B] = 0", cfg.tol);
  const auto [A, B] = heisenberg_A_B(cfg.n);
  const Matrix aa = kron(A, A), bb = kron(B, B);
  for (const auto& pt : sample_points(cfg, one_point(cfg), stream_for(name))) {
    const Matrix r = rb(pt.z);
    acc.add(pt, r * aa, aa * r);
    acc.add(pt, r * bb, bb * r);
  }
  return acc.finish();
}

ResidualReport verify_rb_qybe(const BelavinR& rb) {
  const auto& cfg = rb.config();
  const std::string name = "belavin.qybe";
  ResidualAccumulator acc(name, "R12(z-w) R13(z) R23(w) = R23(w) R13(z) R12(z-w)", cfg.tol);
  SampleConstraints sc;
  sc.arity = 2;
  sc.with_lambda = false;
  sc.z_poles = {{cfg.gamma}};
  sc.w_poles = {{cfg.gamma}};
  sc.diff_poles = {{cfg.gamma}};
  const int n = cfg.n;
  const std::vector<Index> dims{n, n, n};
  const std::vector<int> l01{0, 1}, l02{0, 2}, l12{1, 2};
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const Matrix r12 = leg_embed(rb(pt.z - pt.w), l01, dims);
    const Matrix r13 = leg_embed(rb(pt.z), l02, dims);
    const Matrix r23 = leg_embed(rb(pt.w), l12, dims);
    acc.add(pt, r12 * r13 * r23, r23 * r13 * r12);
  }
  return acc.finish();
}

ResidualReport verify_rb_support_pattern(const BelavinR& rb) {
  const auto& cfg = rb.config();
  const std::string name = "belavin.support_pattern";
  ResidualAccumulator acc(name, "<p q|R(z)|r s> = 0 unless p+q = r+s mod n", cfg.tol);
  const int n = cfg.n;
  for (const auto& pt : sample_points(cfg, one_point(cfg), stream_for(name))) {
    const Matrix r = rb(pt.z);
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if ((p + q - a - b) % n != 0) off = std::max(off, std::abs(r(p * n + q, a * n + b)));
    acc.add_error(pt, off, 0.0);
  }
  return acc.finish();
}

ResidualReport verify_periodicity_B(const BObject& a, const ModuliConfig& cfg, const std::string& name) {
  ResidualAccumulator acc(name, "L(z+n) = L(z) = L(z+n tau)", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = a.z_poles;
  sc.with_lambda = false;
  const double n = cfg.n;
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const Matrix base = a.L(pt.z);
    acc.add(pt, a.L(pt.z + n), base);
    acc.add(pt, a.L(pt.z + n * cfg.tau), base);
  }
  return acc.finish();
}

ResidualReport verify_rll_B(const BObject& a, const BelavinR& rb, const std::string& name) {
  const auto& cfg = rb.config();
  ResidualAccumulator acc(name, "R12(z-w) L13(z) L23(w) = L23(w) L13(z) R12(z-w)", cfg.tol);
  SampleConstraints sc;
  sc.arity = 2;
  sc.with_lambda = false;
  sc.z_poles = a.z_poles;
  sc.w_poles = a.z_poles;
  sc.diff_poles = {{cfg.gamma}};
  const int n = cfg.n;
  const std::vector<Index> dims{n, n, a.dim()};
  const std::vector<int> l01{0, 1}, l02{0, 2}, l12{1, 2};
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) {
    const Matrix r12 = leg_embed(rb(pt.z - pt.w), l01, dims);
    const Matrix L13 = leg_embed(a.L(pt.z), l02, dims);
    const Matrix L23 = leg_embed(a.L(pt.w), l12, dims);
    acc.add(pt, r12 * L13 * L23, L23 * L13 * r12);
  }
  return acc.finish();
}

ResidualReport morphism_check_B(const BObject& a, const BObject& b, const Matrix& phi, const ModuliConfig& cfg,
                                const std::string& name) {
  ResidualAccumulator acc(name, "(1 x phi) L(z) = L'(z) (1 x phi)", cfg.tol);
  if (phi.rows() != b.dim() || phi.cols() != a.dim()) throw dimension_error("morphism_check_B: shapes");
  SampleConstraints sc;
  sc.with_lambda = false;
  sc.z_poles = a.z_poles;
  sc.z_poles.insert(sc.z_poles.end(), b.z_poles.begin(), b.z_poles.end());
  const Matrix lift = kron(Matrix::Identity(cfg.n, cfg.n), phi);
  for (const auto& pt : sample_points(cfg, sc, stream_for(name))) acc.add(pt, lift * a.L(pt.z), b.L(pt.z) * lift);
  return acc.finish();
}

ResidualReport diagonal_solution_check(const std::vector<Matrix>& blocks, const BelavinR& rb,
                                       const std::string& name) {
  const auto& cfg = rb.config();
  const int n = cfg.n;
  if (static_cast<int>(blocks.size()) != n) throw dimension_error("diagonal_solution_check: need n blocks");
  const Index u = blocks[0].rows();
  Matrix t = Matrix::Zero(n * u, n * u);
  for (int i = 0; i < n; ++i) t += kron(elementary(n, i, i), blocks[static_cast<std::size_t>(i)]);
  ResidualAccumulator acc(name, "R12(z) T13 T23 = T23 T13 R12(z)", cfg.tol);
  const std::vector<Index> dims{n, n, u};
  const std::vector<int> l01{0, 1}, l02{0, 2}, l12{1, 2};
  const Matrix t13 = leg_embed(t, l02, dims), t23 = leg_embed(t, l12, dims);
  for (const auto& pt : sample_points(cfg, one_point(cfg), stream_for(name))) {
    const Matrix r12 = leg_embed(rb(pt.z), l01, dims);
    acc.add(pt, r12 * t13 * t23, t23 * t13 * r12);
  }
  return acc.finish();
}

ResidualReport diagonal_solution_converse(int n, Index u_dim, const DiagonalSpec& spec, const BelavinR& rb) {
  if (n != rb.config().n) throw dimension_error("diagonal_solution_converse: n differs from the R-matrix rank");
  if (spec.X.rows() != u_dim || spec.X.cols() != u_dim || spec.D1.rows() != u_dim || spec.D1.cols() != u_dim)
    throw dimension_error("diagonal_solution_converse: X and D1 must be U_dim x U_dim");
  Matrix xn = Matrix::Identity(u_dim, u_dim);
  for (int k = 0; k < n; ++k) xn = xn * spec.X;
  if (max_abs(xn - Matrix::Identity(u_dim, u_dim)) > 1e-12) throw domain_error("diagonal_solution_converse: X^n != 1");
  std::vector<Matrix> blocks{spec.D1};
  for (int i = 1; i < n; ++i) blocks.push_back(spec.X * blocks.back());
  return diagonal_solution_check(blocks, rb, "belavin.diagonal_converse");
}

}  // namespace elq
