// One PASS/FAIL line per acceptance criterion. Exit status 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "elq/belavin.hpp"
#include "elq/diff_algebra.hpp"
#include "elq/errors.hpp"
#include "elq/suites.hpp"

using namespace elq;

namespace {

// Pinned thresholds.
constexpr double kThetaTol = 1e-9;
constexpr double kIdentityTol = 1e-8;
constexpr double kInitialTol = 1e-9;
constexpr double kSupportTol = 1e-10;
constexpr double kCanonicalR3Tol = 1e-7;
constexpr double kRatioSpreadTol = 1e-7;
constexpr int kSamples = 100;
constexpr int kReferences = 20;

constexpr double kThetaSeconds = 1.0;
constexpr double kFelderSeconds = 10.0;
constexpr double kBelavinSeconds = 30.0;
constexpr double kVertexSeconds = 20.0;
constexpr double kCategorySeconds = 30.0;
constexpr double kFunctorSeconds = 60.0;
constexpr double kIntertwinerSeconds = 120.0;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

ModuliConfig config(int n) {
  ModuliConfig c;
  c.n = n;
  c.samples = kSamples;
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every check of the report passes under `tol`, with at least `min_samples` samples.
void require_report(Verdict& v, const RunReport& r, double tol, int min_samples, const std::string& tag) {
  for (const auto& [rep, ms] : r.checks) {
    v.require(rep.pass && rep.max_rel < tol, tag + " " + rep.check_name + " max_rel=" + fmt("%.3e", rep.max_rel));
    v.require(rep.samples >= min_samples || rep.check_name == "belavin.initial" || rep.check_name == "theta.zeros",
              tag + " " + rep.check_name + " too few samples");
  }
}

void require_check(Verdict& v, const ResidualReport& r, double tol, const std::string& tag) {
  v.require(r.pass && r.max_rel < tol, tag + " " + r.check_name + " max_rel=" + fmt("%.3e", r.max_rel));
}

void require_fails(Verdict& v, const ResidualReport& r, const std::string& tag) {
  v.require(!r.pass, tag + " negative control " + r.check_name + " passed");
}

void require_time(Verdict& v, double s, double limit, const std::string& tag) {
  v.require(s < limit, tag + " took " + fmt("%.2f", s) + " s");
}

Verdict theta_suite() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_suite(find_suite("theta"), config(2));
  require_time(v, seconds_since(t0), kThetaSeconds, "theta");
  require_report(v, r, kThetaTol, kSamples, "n=2");
  for (const auto& [rep, ms] : r.checks)
    if (rep.check_name == "theta.zeros") v.require(rep.max_abs < kThetaTol, "lattice zeros");
  return v;
}

Verdict felder_suite() {
  Verdict v;
  for (int n : {2, 3}) {
    const std::string tag = "n=" + std::to_string(n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = config(n);
    for (const char* id : {"felder.unitarity", "felder.weight_zero", "felder.dqybe"}) {
      const auto r = run_check(id, cfg, kIdentityTol);
      require_check(v, r, kIdentityTol, tag);
      v.require(r.samples >= kSamples, tag + " " + id + " samples");
    }
    require_check(v, run_check("felder.rf_initial", cfg, kInitialTol), kInitialTol, tag);
    require_time(v, seconds_since(t0), kFelderSeconds, tag);
    auto bad = cfg;
    bad.beta_perturbation = 0.01;
    require_fails(v, run_check("felder.dqybe", bad), tag);
  }
  return v;
}

Verdict belavin_suite() {
  Verdict v;
  for (int n : {2, 3}) {
    const std::string tag = "n=" + std::to_string(n);
    const auto cfg = config(n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto ref = verify_rb_reference_independence(cfg, kReferences);
    require_check(v, ref, kIdentityTol, tag);
    const BelavinR rb(cfg);
    for (const auto& r : {verify_rb_unitarity(rb), verify_rb_initial(rb), verify_rb_translation_one(rb),
                          verify_rb_translation_tau(rb), verify_rb_heisenberg(rb), verify_rb_qybe(rb)})
      require_check(v, r, kIdentityTol, tag);
    const auto support = verify_rb_support_pattern(rb);
    v.require(support.max_abs < kSupportTol, tag + " off-pattern entry " + fmt("%.3e", support.max_abs));
    require_check(v, run_check("belavin.diagonal_converse", cfg), kIdentityTol, tag);
    Matrix d1 = Matrix::Zero(n, n), swap = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      d1(i, i) = 1.0 + i;
      swap(i, (i + 1) % n) = 1.0;
    }
    std::vector<Matrix> blocks{d1};
    for (int i = 1; i < n; ++i) blocks.push_back(swap);
    require_fails(v, diagonal_solution_check(blocks, rb, "belavin.diagonal_noncommuting"), tag);
    require_time(v, seconds_since(t0), kBelavinSeconds, tag);
  }
  return v;
}

Verdict vertex_suite() {
  Verdict v;
  for (int n : {2, 3}) {
    const std::string tag = "n=" + std::to_string(n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_suite(find_suite("vertex-irf"), config(n));
    require_report(v, r, kIdentityTol, kSamples, tag);
    require_time(v, seconds_since(t0), kVertexSeconds, tag);
    require_fails(v, verify_irf_components(config(n), false, true), tag);
  }
  return v;
}

Verdict category_suites() {
  Verdict v;
  for (int n : {2, 3}) {
    const std::string tag = "n=" + std::to_string(n);
    const auto cfg = config(n);
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* id : {"belavin.vector_periodicity", "belavin.tensor_rll", "felder.tensor_rll", "felder.dual_rll",
                           "belavin.dual_rll", "belavin.double_dual_rll"})
      require_check(v, run_check(id, cfg, kIdentityTol), kIdentityTol, tag);
    require_time(v, seconds_since(t0), kCategorySeconds, tag);
  }
  return v;
}

Verdict functor_suites() {
  Verdict v;
  for (int n : {2, 3}) {
    const std::string tag = "n=" + std::to_string(n);
    const auto cfg = config(n);
    const auto t0 = std::chrono::steady_clock::now();
    require_report(v, run_suite(find_suite("lemma1"), cfg), kIdentityTol, kSamples, tag);
    const auto f = run_suite(find_suite("functors"), cfg);
    require_report(v, f, kIdentityTol, kSamples, tag);
    std::set<std::string> seen;
    for (const auto& [rep, ms] : f.checks) seen.insert(rep.check_name);
    v.require(seen.contains("functors.icx_structure") && seen.contains("functors.functoriality"), tag + " coverage");
    require_time(v, seconds_since(t0), kFunctorSeconds, tag);
  }
  return v;
}

Verdict intertwiner_suites() {
  Verdict v;
  const auto cfg = config(2);
  const std::string tag = "n=2";
  const auto t0 = std::chrono::steady_clock::now();
  v.require(cfg.ws.size() >= 5, "fewer than five spectral points");
  require_check(v, run_check("intertwiners.prop4", cfg, kIdentityTol), kIdentityTol, tag);
  require_check(v, run_check("intertwiners.prop4_inverse", cfg, kIdentityTol), kIdentityTol, tag);
  require_check(v, run_check("intertwiners.canonical_r2", cfg, kIdentityTol), kIdentityTol, tag);
  require_check(v, run_check("intertwiners.canonical_r3", cfg, kCanonicalR3Tol), kCanonicalR3Tol, tag);
  require_check(v, run_check("intertwiners.tensor_vs_canonical", cfg, kRatioSpreadTol), kRatioSpreadTol, tag);
  bool raised = false;
  try {
    prop4_intertwiner(cfg.x + cfg.c, cfg);
  } catch (const singularity_error&) {
    raised = true;
  }
  v.require(raised, "no singularity error at w = x + c");
  // negative controls
  require_fails(v, verify_prop4(cfg, "intertwiners.prop4.conjugation"), tag);
  require_fails(v, verify_prop4(cfg, "intertwiners.prop4.pointwise"), tag);
  const BelavinR rb(cfg);
  const std::vector<cd> ws{cfg.ws[0], cfg.ws[1]};
  const auto h = functor_H(tensor_vector_B(ws, rb), cfg);
  const auto f = functor_F(tensor_vector_F(ws, cfg), cfg);
  const auto bad = tensor_intertwiners(prop4_intertwiner(ws[0], cfg), prop4_pointwise_reading(ws[1], cfg));
  require_fails(v, morphism_check_DB(h, f, bad, cfg, "intertwiners.failing_factor"), tag);
  Matrix m(2, 2);
  m << cd(0.3, 1.0), 2.0, cd(-1.0, 0.5), 0.7;
  const DiffOp rnd(2, 2, 2, cfg.gamma, {{WeightKey::omega(2, 0), [m](const WeightVector& l) { return Matrix(m * l[0]); }}});
  const auto hv = functor_H(vector_rep_B(ws[0], rb), cfg);
  const auto fv = functor_F(vector_rep_F(ws[0], true, cfg), cfg);
  require_fails(v, morphism_check_DB(hv, fv, rnd, cfg, "intertwiners.random"), tag);
  require_time(v, seconds_since(t0), kIntertwinerSeconds, tag);
  return v;
}

Verdict determinism() {
  Verdict v;
  auto cfg = config(2);
  cfg.seed = 42;
  const auto suite = find_suite("full");
  const std::string a = report_json(run_suite(suite, cfg), false);
  const std::string b = report_json(run_suite(suite, cfg), false);
  v.require(a == b, "reports differ");
  v.require(parse_report(a).checks.size() == suite.checks.size(), "report round trip");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 theta suite", theta_suite},
      {"2 felder suite", felder_suite},
      {"3 belavin suite", belavin_suite},
      {"4 vertex-irf suite", vertex_suite},
      {"5 category suites", category_suites},
      {"6 functor suites", functor_suites},
      {"7 intertwiner suites", intertwiner_suites},
      {"8 determinism", determinism},
  };
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    all = all && v.ok;
    std::printf("%s criterion %s (%.2f s)%s%s\n", v.ok ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                v.detail.empty() ? "" : ": ", v.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
