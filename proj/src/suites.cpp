#include "elq/suites.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "elq/belavin.hpp"
#include "elq/diff_algebra.hpp"
#include "elq/errors.hpp"
#include "elq/felder.hpp"
#include "elq/theta_checks.hpp"
#include "elq/vertex_irf.hpp"
#include "json.hpp"

namespace elq {

namespace {

using Json = nlohmann::ordered_json;
using CheckFn = std::function<ResidualReport(const ModuliConfig&)>;

cd w_at(const ModuliConfig& cfg, std::size_t k) {
  if (cfg.ws.size() <= k) throw config_error("check needs at least " + std::to_string(k + 1) + " points in ws");
  return cfg.ws[k];
}

FObject tensor_pair_F(const ModuliConfig& cfg, std::size_t first, std::size_t second) {
  return tensor_F(vector_rep_F(w_at(cfg, first), false, cfg), vector_rep_F(w_at(cfg, second), false, cfg), cfg);
}

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks = [] {
    std::map<std::string, CheckFn> m;
    // theta
    m["theta.monodromy_one"] = verify_theta_monodromy_one;
    m["theta.monodromy_tau"] = verify_theta_monodromy_tau;
    m["theta.char_shift"] = verify_theta_char_shift;
    m["theta.zeros"] = verify_theta_zeros;
    m["theta.odd"] = verify_theta_odd;
    m["theta.phi_monodromy"] = verify_phi_monodromy;
    // felder
    m["felder.rf_initial"] = verify_rf_initial;
    m["felder.unitarity"] = verify_rf_unitarity;
    m["felder.weight_zero"] = verify_rf_weight_zero;
    m["felder.alpha_beta_monodromy"] = verify_alpha_beta_table;
    m["felder.dqybe"] = verify_dqybe;
    m["felder.vector_rll"] = [](const ModuliConfig& c) {
      return verify_rll_F(vector_rep_F(w_at(c, 0), false, c), c, "felder.vector_rll");
    };
    m["felder.vector_periodicity"] = [](const ModuliConfig& c) {
      return verify_periodicity_F(vector_rep_F(w_at(c, 0), false, c), c, "felder.vector_periodicity");
    };
    m["felder.tensor_rll"] = [](const ModuliConfig& c) {
      return verify_rll_F(tensor_pair_F(c, 0, 1), c, "felder.tensor_rll");
    };
    m["felder.tensor_weight_zero"] = [](const ModuliConfig& c) {
      return verify_weight_zero_F(tensor_pair_F(c, 0, 1), c, "felder.tensor_weight_zero");
    };
    m["felder.dual_rll"] = [](const ModuliConfig& c) {
      return verify_rll_F(dual_F(vector_rep_F(w_at(c, 0), false, c), c), c, "felder.dual_rll");
    };
    m["felder.exchange_morphism"] = [](const ModuliConfig& c) {
      return morphism_check_F(tensor_pair_F(c, 0, 1), tensor_pair_F(c, 1, 0), exchange_morphism_F(c.ws[0], c.ws[1], c),
                              c, "felder.exchange_morphism");
    };
    m["felder.dual_exchange_morphism"] = [](const ModuliConfig& c) {
      const auto a = tensor_pair_F(c, 0, 1), b = tensor_pair_F(c, 1, 0);
      return morphism_check_F(dual_F(b, c), dual_F(a, c), dual_morphism_F(exchange_morphism_F(c.ws[0], c.ws[1], c), c),
                              c, "felder.dual_exchange_morphism");
    };
    // belavin
    m["belavin.reference_independence"] = [](const ModuliConfig& c) { return verify_rb_reference_independence(c, 20); };
    m["belavin.unitarity"] = [](const ModuliConfig& c) { return verify_rb_unitarity(BelavinR(c)); };
    m["belavin.initial"] = [](const ModuliConfig& c) { return verify_rb_initial(BelavinR(c)); };
    m["belavin.translation_one"] = [](const ModuliConfig& c) { return verify_rb_translation_one(BelavinR(c)); };
    m["belavin.translation_tau"] = [](const ModuliConfig& c) { return verify_rb_translation_tau(BelavinR(c)); };
    m["belavin.heisenberg"] = [](const ModuliConfig& c) { return verify_rb_heisenberg(BelavinR(c)); };
    m["belavin.qybe"] = [](const ModuliConfig& c) { return verify_rb_qybe(BelavinR(c)); };
    m["belavin.support_pattern"] = [](const ModuliConfig& c) { return verify_rb_support_pattern(BelavinR(c)); };
    m["belavin.diagonal_converse"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      Matrix d1 = Matrix::Zero(c.n, c.n);
      for (int i = 0; i < c.n; ++i) d1(i, i) = cd(1.0 + i, 0.3 * i);
      return diagonal_solution_converse(c.n, c.n, {heisenberg_A_B(c.n).A, d1}, rb);
    };
    m["belavin.vector_periodicity"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_periodicity_B(vector_rep_B(w_at(c, 0), rb), c, "belavin.vector_periodicity");
    };
    m["belavin.vector_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_B(vector_rep_B(w_at(c, 0), rb), rb, "belavin.vector_rll");
    };
    m["belavin.tensor_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_B(tensor_B(vector_rep_B(w_at(c, 0), rb), vector_rep_B(w_at(c, 1), rb), c), rb,
                          "belavin.tensor_rll");
    };
    m["belavin.dual_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_B(dual_B(vector_rep_B(w_at(c, 0), rb), c), rb, "belavin.dual_rll");
    };
    m["belavin.double_dual_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_B(dual_B(dual_B(vector_rep_B(w_at(c, 0), rb), c), c), rb, "belavin.double_dual_rll");
    };
    // vertex-irf
    m["vertex_irf.det_ratio"] = verify_det_ratio;
    m["vertex_irf.relation_1"] = [](const ModuliConfig& c) { return verify_vertex_irf(c, 1); };
    m["vertex_irf.relation_2"] = [](const ModuliConfig& c) { return verify_vertex_irf(c, 2); };
    m["vertex_irf.components_diagonal"] = [](const ModuliConfig& c) { return verify_irf_components(c, true); };
    m["vertex_irf.components_offdiagonal"] = [](const ModuliConfig& c) { return verify_irf_components(c, false); };
    // lemma1
    m["diff.composition_oracle"] = verify_composition_oracle;
    m["diff.associativity"] = verify_composition_associative;
    m["lemma1.vector"] = [](const ModuliConfig& c) {
      return verify_lemma1(vector_rep_F(w_at(c, 0), false, c), {c.x}, {c.x + c.c}, c, "lemma1.vector");
    };
    m["lemma1.trivial"] = [](const ModuliConfig& c) {
      return verify_lemma1(trivial_F(c), {c.x}, {c.x + c.c}, c, "lemma1.trivial");
    };
    m["lemma1.same_twist"] = [](const ModuliConfig& c) {
      return verify_lemma1(vector_rep_F(w_at(c, 0), false, c), {c.x}, {c.x}, c, "lemma1.same_twist");
    };
    // functors
    m["functors.twist_support"] = [](const ModuliConfig& c) {
      return verify_twist_support(vector_rep_F(w_at(c, 0), false, c), c, "functors.twist_support");
    };
    m["functors.icx_structure"] = verify_icx_structure;
    m["functors.icx_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_DB(icx_object(c), rb, "functors.icx_rll");
    };
    m["functors.F_vector_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_DB(functor_F(vector_rep_F(w_at(c, 0), true, c), c), rb, "functors.F_vector_rll");
    };
    m["functors.F_tensor_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_DB(functor_F(tensor_pair_F(c, 0, 1), c), rb, "functors.F_tensor_rll");
    };
    m["functors.H_vector_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_DB(functor_H(vector_rep_B(w_at(c, 0), rb), c), rb, "functors.H_vector_rll");
    };
    m["functors.H_tensor_rll"] = [](const ModuliConfig& c) {
      const BelavinR rb(c);
      return verify_rll_DB(functor_H(tensor_B(vector_rep_B(w_at(c, 0), rb), vector_rep_B(w_at(c, 1), rb), c), c), rb,
                           "functors.H_tensor_rll");
    };
    m["functors.functoriality"] = verify_functoriality;
    m["functors.scalar_morphism"] = [](const ModuliConfig& c) {
      const auto f = functor_F(vector_rep_F(w_at(c, 0), true, c), c);
      const Matrix s = cd(2.0, -0.5) * Matrix::Identity(c.n, c.n);
      return morphism_check_DB(f, f, DiffOp::constant(s, c.n, c.gamma), c, "functors.scalar_morphism");
    };
    // intertwiners
    m["intertwiners.tilde_S"] = verify_tilde_S;
    m["intertwiners.prop4"] = [](const ModuliConfig& c) { return verify_prop4(c, "intertwiners.prop4"); };
    m["intertwiners.prop4_inverse"] = verify_prop4_inverse;
    m["intertwiners.canonical_r2"] = [](const ModuliConfig& c) {
      return verify_canonical(c, 2, "intertwiners.canonical_r2");
    };
    m["intertwiners.canonical_r3"] = [](const ModuliConfig& c) {
      return verify_canonical(c, 3, "intertwiners.canonical_r3");
    };
    m["intertwiners.tensor_vs_canonical"] = verify_tensor_proportional;
    return m;
  }();
  return checks;
}

std::vector<CheckSpec> ids(std::initializer_list<const char*> names, std::optional<double> tol = {}) {
  std::vector<CheckSpec> out;
  for (const char* n : names) out.push_back({n, tol});
  return out;
}

Json complex_json(cd v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

double number(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

cd complex_from(const Json& j) { return {number(j.at("re")), number(j.at("im"))}; }

}  // namespace

std::vector<SuiteSpec> list_suites() {
  std::vector<SuiteSpec> s;
  s.push_back({"theta", "theta monodromy, characteristic shift, zeros, oddness, Phi monodromy",
               ids({"theta.monodromy_one", "theta.monodromy_tau", "theta.char_shift", "theta.zeros", "theta.odd",
                    "theta.phi_monodromy"},
                   1e-9)});
  auto felder = ids({"felder.unitarity", "felder.weight_zero", "felder.alpha_beta_monodromy", "felder.dqybe",
                     "felder.vector_rll", "felder.vector_periodicity", "felder.tensor_rll", "felder.tensor_weight_zero",
                     "felder.dual_rll", "felder.exchange_morphism", "felder.dual_exchange_morphism"});
  felder.insert(felder.begin(), CheckSpec{"felder.rf_initial", 1e-9});
  s.push_back({"felder", "R^F properties, dynamical QYBE, the F-category", felder});
  auto belavin = ids({"belavin.reference_independence", "belavin.unitarity", "belavin.initial",
                      "belavin.translation_one", "belavin.translation_tau", "belavin.heisenberg", "belavin.qybe"});
  belavin.push_back({"belavin.support_pattern", 1e-10});
  for (auto& c : ids({"belavin.diagonal_converse", "belavin.vector_periodicity", "belavin.vector_rll",
                      "belavin.tensor_rll", "belavin.dual_rll", "belavin.double_dual_rll"}))
    belavin.push_back(c);
  s.push_back({"belavin", "R^B from R^F, its properties, the B-category", belavin});
  s.push_back({"vertex-irf", "S(z, lambda), both vertex-face relations, componentwise identities",
               ids({"vertex_irf.det_ratio", "vertex_irf.relation_1", "vertex_irf.relation_2",
                    "vertex_irf.components_diagonal", "vertex_irf.components_offdiagonal"})});
  s.push_back({"lemma1", "difference operator algebra and the twisted exchange relation",
               ids({"diff.composition_oracle", "diff.associativity", "lemma1.vector", "lemma1.trivial",
                    "lemma1.same_twist"})});
  s.push_back({"functors", "I^c_x, images of F and H, functoriality",
               ids({"functors.twist_support", "functors.icx_structure", "functors.icx_rll", "functors.F_vector_rll",
                    "functors.F_tensor_rll", "functors.H_vector_rll", "functors.H_tensor_rll", "functors.functoriality",
                    "functors.scalar_morphism"})});
  auto inter = ids({"intertwiners.tilde_S", "intertwiners.prop4", "intertwiners.prop4_inverse",
                    "intertwiners.canonical_r2"});
  inter.push_back({"intertwiners.canonical_r3", 1e-7});
  inter.push_back({"intertwiners.tensor_vs_canonical", 1e-7});
  s.push_back({"intertwiners", "H(V_B) -> F(V~_F) intertwiners and their tensor products", inter});
  SuiteSpec full{"full", "every suite above", {}};
  for (const auto& suite : s) full.checks.insert(full.checks.end(), suite.checks.begin(), suite.checks.end());
  s.push_back(full);
  return s;
}

SuiteSpec find_suite(std::string_view name) {
  for (auto& s : list_suites())
    if (s.name == name) return s;
  throw config_error("unknown suite '" + std::string(name) + "'");
}

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

ResidualReport run_check(const std::string& id, const ModuliConfig& cfg, std::optional<double> tol) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw config_error("unknown check '" + id + "'");
  ModuliConfig c = cfg;
  if (tol) c.tol = *tol;
  auto r = it->second(c);
  r.check_name = id;
  return r;
}

RunReport run_suite(const SuiteSpec& suite, const ModuliConfig& cfg) {
  cfg.validate();
  for (const auto& c : suite.checks)
    if (!registry().contains(c.id)) throw config_error("unknown check '" + c.id + "'");
  RunReport out{suite.name, cfg, {}, true};
  for (const auto& c : suite.checks) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_check(c.id, cfg, c.tol);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.pass = out.pass && r.pass;
    out.checks.push_back({std::move(r), ms});
  }
  return out;
}

std::string report_json(const RunReport& report, bool include_timing) {
  const ModuliConfig& c = report.config;
  Json ws = Json::array();
  for (cd w : c.ws) ws.push_back(complex_json(w));
  Json cfg{{"n", c.n},
           {"tau", complex_json(c.tau)},
           {"gamma", c.gamma},
           {"c", complex_json(c.c)},
           {"x", complex_json(c.x)},
           {"tol", c.tol},
           {"series_tol", c.series_tol},
           {"seed", c.seed},
           {"samples", c.samples},
           {"pole_delta", c.pole_delta},
           {"ws", ws},
           {"beta_perturbation", c.beta_perturbation}};
  Json checks = Json::array();
  for (const auto& [r, ms] : report.checks) {
    Json lambda = Json::array();
    for (cd v : r.worst_point.lambda.coords()) lambda.push_back(complex_json(v));
    checks.push_back(Json{{"name", r.check_name},
                          {"paper_ref", r.paper_ref},
                          {"samples", r.samples},
                          {"max_abs", r.max_abs},
                          {"max_rel", r.max_rel},
                          {"worst_point",
                           {{"z", complex_json(r.worst_point.z)}, {"w", complex_json(r.worst_point.w)}, {"lambda", lambda}}},
                          {"tol", r.tol},
                          {"pass", r.pass},
                          {"ms", include_timing ? ms : 0.0}});
  }
  Json j{{"suite", report.suite}, {"config", cfg}, {"checks", checks}, {"pass", report.pass}};
  return j.dump(2) + "\n";
}

RunReport parse_report(const std::string& json_text) {
  const Json j = Json::parse(json_text);
  RunReport out;
  out.suite = j.at("suite").get<std::string>();
  const Json& c = j.at("config");
  out.config.n = c.at("n").get<int>();
  out.config.tau = complex_from(c.at("tau"));
  out.config.gamma = number(c.at("gamma"));
  out.config.c = complex_from(c.at("c"));
  out.config.x = complex_from(c.at("x"));
  out.config.tol = number(c.at("tol"));
  out.config.series_tol = number(c.at("series_tol"));
  out.config.seed = c.at("seed").get<std::uint64_t>();
  out.config.samples = c.at("samples").get<int>();
  out.config.pole_delta = number(c.at("pole_delta"));
  out.config.ws.clear();
  for (const auto& w : c.at("ws")) out.config.ws.push_back(complex_from(w));
  out.config.beta_perturbation = number(c.at("beta_perturbation"));
  for (const auto& e : j.at("checks")) {
    CheckResult r;
    r.report.check_name = e.at("name").get<std::string>();
    r.report.paper_ref = e.at("paper_ref").get<std::string>();
    r.report.samples = e.at("samples").get<int>();
    r.report.max_abs = number(e.at("max_abs"));
    r.report.max_rel = number(e.at("max_rel"));
    const Json& wp = e.at("worst_point");
    r.report.worst_point.z = complex_from(wp.at("z"));
    r.report.worst_point.w = complex_from(wp.at("w"));
    std::vector<cd> lam;
    for (const auto& v : wp.at("lambda")) lam.push_back(complex_from(v));
    if (!lam.empty()) r.report.worst_point.lambda = WeightVector::projected(lam);
    r.report.tol = number(e.at("tol"));
    r.report.pass = e.at("pass").get<bool>();
    r.ms = number(e.at("ms"));
    out.checks.push_back(std::move(r));
  }
  out.pass = j.at("pass").get<bool>();
  return out;
}

std::string summary_table(const RunReport& report) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "suite %s  n=%d  seed=%llu\n", report.suite.c_str(), report.config.n,
                static_cast<unsigned long long>(report.config.seed));
  out += line;
  std::snprintf(line, sizeof line, "%-38s %7s %11s %11s %9s %9s  %s\n", "check", "samples", "max_abs", "max_rel", "tol",
                "ms", "result");
  out += line;
  for (const auto& [r, ms] : report.checks) {
    std::snprintf(line, sizeof line, "%-38s %7d %11.3e %11.3e %9.1e %9.1f  %s\n", r.check_name.c_str(), r.samples,
                  r.max_abs, r.max_rel, r.tol, ms, r.pass ? "pass" : "FAIL");
    out += line;
    if (!r.pass) {
      const auto& p = r.worst_point;
      std::string lam;
      for (cd v : p.lambda.coords()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.6g%+.6gi", lam.empty() ? "" : ", ", v.real(), v.imag());
        lam += buf;
      }
      std::snprintf(line, sizeof line, "    worst at z=%.6g%+.6gi w=%.6g%+.6gi lambda=(%s)\n", p.z.real(), p.z.imag(),
                    p.w.real(), p.w.imag(), lam.c_str());
      out += line;
    }
  }
  out += report.pass ? "overall: pass\n" : "overall: FAIL\n";
  return out;
}

void emit_report(const RunReport& report, const std::string& path, std::ostream& summary, bool include_timing) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << report_json(report, include_timing);
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
  summary << summary_table(report);
}

cd parse_complex(std::string_view text) {
  const auto fail = [&](std::size_t pos, const std::string& what) -> cd {
    throw config_error("complex '" + std::string(text) + "': position " + std::to_string(pos) + ": " + what);
  };
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (text.empty()) return fail(0, "empty input");
  // std::from_chars rejects a leading '+'
  const auto read = [&](const char* at, double& v) -> const char* {
    const char* p = at;
    bool neg = false;
    if (p < end && (*p == '+' || *p == '-')) neg = *p++ == '-';
    if (p < end && (*p == '+' || *p == '-')) return nullptr;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) return nullptr;
    if (neg) v = -v;
    return next;
  };
  double a = 0.0;
  const char* p = read(begin, a);
  if (!p) return fail(0, "expected a decimal number");
  if (p == end) return {a, 0.0};
  if (*p == 'i') {
    if (p + 1 != end) return fail(static_cast<std::size_t>(p + 1 - begin), "unexpected text after 'i'");
    return {0.0, a};
  }
  if (*p != '+' && *p != '-') return fail(static_cast<std::size_t>(p - begin), "expected '+', '-' or 'i'");
  double b = 0.0;
  const char* q = read(p, b);
  if (!q) return fail(static_cast<std::size_t>(p + 1 - begin), "expected a decimal number");
  if (q == end || *q != 'i') return fail(static_cast<std::size_t>(q - begin), "expected 'i'");
  if (q + 1 != end) return fail(static_cast<std::size_t>(q + 1 - begin), "unexpected text after 'i'");
  return {a, b};
}

}  // namespace elq
