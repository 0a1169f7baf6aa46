#pragma once

// Named verification suites and their machine-readable reports.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elq/config.hpp"
#include "elq/residual.hpp"

namespace elq {

struct CheckSpec {
  std::string id;
  std::optional<double> tol;  ///< overrides cfg.tol for this check
};

struct SuiteSpec {
  std::string name;
  std::string summary;
  std::vector<CheckSpec> checks;
};

struct CheckResult {
  ResidualReport report;
  double ms = 0.0;
};

struct RunReport {
  std::string suite;
  ModuliConfig config;
  std::vector<CheckResult> checks;
  bool pass = false;
};

/// theta, felder, belavin, vertex-irf, lemma1, functors, intertwiners, full.
std::vector<SuiteSpec> list_suites();
/// Throws config_error for an unknown name.
SuiteSpec find_suite(std::string_view name);
/// Every check identifier the registry resolves.
std::vector<std::string> known_checks();

/// Runs one check with cfg.tol replaced by `tol` when given. Throws config_error for an
/// unknown identifier.
ResidualReport run_check(const std::string& id, const ModuliConfig& cfg, std::optional<double> tol = {});

/// Validates cfg, then runs the checks in suite order.
RunReport run_suite(const SuiteSpec& suite, const ModuliConfig& cfg);

/// JSON text: {"suite", "config", "checks": [{name, paper_ref, samples, max_abs, max_rel,
/// worst_point, tol, pass, ms}], "pass"}. Complex numbers are {"re", "im"}; non-finite
/// values are null. With include_timing false every "ms" is 0.
std::string report_json(const RunReport& report, bool include_timing = true);
/// Inverse of report_json (null reads back as +infinity).
RunReport parse_report(const std::string& json_text);

/// Fixed-width table, one line per check.
std::string summary_table(const RunReport& report);

/// Writes report_json to `path` and the summary table to `summary`. Throws std::runtime_error
/// when the file cannot be written.
void emit_report(const RunReport& report, const std::string& path, std::ostream& summary, bool include_timing = true);

/// "a+bi", "a-bi", "a", "bi" with decimal literals. Throws config_error naming the
/// offending character position.
cd parse_complex(std::string_view text);

}  // namespace elq
