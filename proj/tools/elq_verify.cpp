// Batch verification runner: elq_verify --suite full --n 2 --out report.json

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elq/errors.hpp"
#include "elq/suites.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  elq::ModuliConfig cfg;
  std::string suite = "full";
  std::string tau, c, x, out;
  std::vector<std::string> ws;
  bool list = false, no_timing = false;
  double perturb = 0.0;

  CLI::App app{"Run numerical verification suites and write a JSON report."};
  app.add_option("--suite", suite, "suite name (see --list)");
  app.add_option("--n", cfg.n, "rank");
  app.add_option("--tau", tau, "modulus as a+bi");
  app.add_option("--gamma", cfg.gamma, "anisotropy");
  app.add_option("--c", c, "functor offset as a+bi");
  app.add_option("--x", x, "functor base point as a+bi");
  app.add_option("--w", ws, "spectral point as a+bi (repeatable; replaces the defaults)");
  app.add_option("--samples", cfg.samples, "samples per check");
  app.add_option("--tol", cfg.tol, "residual threshold for checks without a suite override");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--out", out, "JSON report path (default: stdout)");
  app.add_flag("--list", list, "list suites and exit");
  app.add_flag("--no-timing", no_timing, "write ms = 0 so reports are byte-identical across runs");
  app.add_option("--perturb-beta", perturb)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return e.get_exit_code() == 0 ? rc : kConfigError;
  }

  if (list) {
    for (const auto& s : elq::list_suites()) {
      std::cout << s.name << "  (" << s.checks.size() << " checks)  " << s.summary << "\n";
      for (const auto& ch : s.checks) std::cout << "    " << ch.id << "\n";
    }
    return kPass;
  }

  elq::RunReport report;
  try {
    if (!tau.empty()) cfg.tau = elq::parse_complex(tau);
    if (!c.empty()) cfg.c = elq::parse_complex(c);
    if (!x.empty()) cfg.x = elq::parse_complex(x);
    if (!ws.empty()) {
      cfg.ws.clear();
      for (const auto& w : ws) cfg.ws.push_back(elq::parse_complex(w));
    }
    cfg.beta_perturbation = perturb;
    report = elq::run_suite(elq::find_suite(suite), cfg);
  } catch (const elq::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (out.empty()) {
      std::cout << elq::report_json(report, !no_timing);
      std::cerr << elq::summary_table(report);
    } else {
      elq::emit_report(report, out, std::cout, !no_timing);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return report.pass ? kPass : kCheckFailure;
}
