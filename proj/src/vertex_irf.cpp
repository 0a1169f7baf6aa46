#include "elq/vertex_irf.hpp"

#include "elq/belavin.hpp"
#include "elq/dynamical.hpp"
#include "elq/errors.hpp"
#include "elq/felder.hpp"
#include "elq/sampling.hpp"
#include "elq/theta.hpp"

namespace elq {

Matrix build_S(cd z, const WeightVector& lambda, const ModuliConfig& cfg) {
  const int n = cfg.n;
  if (lambda.rank() != n) throw dimension_error("build_S: lambda rank differs from n");
  Matrix s(n, n);
  for (int j = 0; j < n; ++j) s.col(j) = phi_vec(z - static_cast<double>(n) * lambda[j], cfg);
  return s;
}

ThetaCharacteristics det_S_characteristics(int n) {
  return n % 2 == 0 ? ThetaCharacteristics{0.5, 0.5} : ThetaCharacteristics{0.0, 0.0};
}

cd det_ratio(cd z, const WeightVector& lambda, const ModuliConfig& cfg) {
  return build_S(z, lambda, cfg).determinant() /
         theta_char(det_S_characteristics(cfg.n), z, cfg.tau, cfg.series_tol);
}

ResidualReport verify_det_ratio(const ModuliConfig& cfg) {
  const std::string name = "vertex_irf.det_ratio";
  ResidualAccumulator acc(name, "det S(z,l) = Const(l) theta(z)", cfg.tol);
  SampleConstraints sc;
  sc.z_poles = {{cfg.n % 2 == 0 ? cd(0.0) : 0.5 + 0.5 * cfg.tau}};
  const auto lambdas = sample_points(cfg, sc, stream_for(name));
  ModuliConfig inner = cfg;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const auto& lam = lambdas[k].lambda;
    const cd ref = det_ratio(lambdas[k].z, lam, cfg);
    const auto zs = sample_points(cfg, sc, stream_for(name) + 1 + k, 10);
    for (auto pt : zs) {
      pt.lambda = lam;
      acc.add(pt, det_ratio(pt.z, lam, cfg), ref);
    }
  }
  return acc.finish();
}

namespace {

struct IrfSides {
  Matrix lhs;
  Matrix rhs;
};

IrfSides relation_sides(int relation, cd z, cd w, const WeightVector& lam, const Matrix& rb, const RFFunction& rf,
                        const ModuliConfig& cfg) {
  const int n = cfg.n;
  const std::vector<HModule> layout(2, HModule::vector_rep(n));
  const std::vector<Index> dims{n, n};
  const std::vector<int> leg0{0}, leg1{1};
  const auto s1 = [&](cd u) {
    return embedded([&cfg, u](const WeightVector& l) { return build_S(u, l, cfg); }, {0}, dims);
  };
  const auto s2 = [&](cd u) {
    return embedded([&cfg, u](const WeightVector& l) { return build_S(u, l, cfg); }, {1}, dims);
  };
  const Matrix r = rf(z - w, lam);
  if (relation == 1) {
    return {rb * s1(z)(lam) * apply_dyn_shift(s2(w), layout, leg0, lam, cfg.gamma, -1),
            s2(w)(lam) * apply_dyn_shift(s1(z), layout, leg1, lam, cfg.gamma, -1) * r};
  }
  return {rb * s2(w)(lam) * apply_dyn_shift(s1(z), layout, leg1, lam, cfg.gamma, +1),
          s1(z)(lam) * apply_dyn_shift(s2(w), layout, leg0, lam, cfg.gamma, +1) * r};
}

SampleConstraints two_point(const ModuliConfig& cfg) {
  SampleConstraints sc;
  sc.arity = 2;
  sc.diff_poles = {{cfg.gamma}, {0.0}};
  return sc;
}

}  // namespace

ResidualReport verify_vertex_irf_with(const ModuliConfig& cfg, int relation, const RFFunction& rf,
                                      const std::string& name) {
  const std::string ref = relation == 1   ? "R(z-w) S1(z,l) S2(w,l-g h1) = S2(w,l) S1(z,l-g h2) RF(z-w,l)"
                          : relation == 2 ? "R(z-w) S2(w,l) S1(z,l+g h2) = S1(z,l) S2(w,l+g h1) RF(z-w,l)"
                                          : "both vertex-face relations";
  ResidualAccumulator acc(name, ref, cfg.tol);
  const BelavinR rb(cfg);
  for (const auto& pt : sample_points(cfg, two_point(cfg), stream_for(name))) {
    const Matrix r = rb(pt.z - pt.w);
    for (int rel : {1, 2}) {
      if (relation != 0 && relation != rel) continue;
      const auto sides = relation_sides(rel, pt.z, pt.w, pt.lambda, r, rf, cfg);
      acc.add(pt, sides.lhs, sides.rhs);
    }
  }
  return acc.finish();
}

ResidualReport verify_vertex_irf(const ModuliConfig& cfg, int relation) {
  const std::string name = relation == 0 ? "vertex_irf.relations" : "vertex_irf.relation_" + std::to_string(relation);
  return verify_vertex_irf_with(
      cfg, relation, [&cfg](cd u, const WeightVector& l) { return build_RF(u, l, cfg); }, name);
}

ResidualReport verify_irf_components(const ModuliConfig& cfg, bool diagonal, bool swap_coefficients) {
  std::string name = diagonal ? "vertex_irf.components_diagonal" : "vertex_irf.components_offdiagonal";
  if (swap_coefficients) name += ".swapped";
  ResidualAccumulator acc(name,
                          diagonal ? "R(z-w) Phi_i(z,l) x Phi_i(w,l-g w_i) = Phi_i(z,l-g w_i) x Phi_i(w,l)"
                                   : "R(z-w) Phi_i(z,l) x Phi_j(w,l-g w_i) = a Phi_i(z,l-g w_j) x Phi_j(w,l) + "
                                     "b Phi_j(z,l-g w_i) x Phi_i(w,l)",
                          cfg.tol);
  const int n = cfg.n;
  const BelavinR rb(cfg);
  const auto col = [&](cd u, const WeightVector& l, int j) -> Matrix {
    return phi_vec(u - static_cast<double>(n) * l[j], cfg);
  };
  const auto sh = [&](const WeightVector& l, int i) { return shifted(l, -WeightKey::omega(n, i), cfg.gamma); };
  for (const auto& pt : sample_points(cfg, two_point(cfg), stream_for(name))) {
    const Matrix r = rb(pt.z - pt.w);
    const auto& l = pt.lambda;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (diagonal != (i == j)) continue;
        const Matrix lhs = r * kron(col(pt.z, l, i), col(pt.w, sh(l, i), j));
        Matrix rhs;
        if (i == j) {
          rhs = kron(col(pt.z, sh(l, i), i), col(pt.w, l, i));
        } else {
          auto ab = alpha_beta(pt.z - pt.w, l[i] - l[j], cfg);
          if (swap_coefficients) std::swap(ab.alpha, ab.beta);
          rhs = ab.alpha * kron(col(pt.z, sh(l, j), i), col(pt.w, l, j)) +
                ab.beta * kron(col(pt.z, sh(l, i), j), col(pt.w, l, i));
        }
        acc.add(pt, lhs, rhs);
      }
  }
  return acc.finish();
}

}  // namespace elq
