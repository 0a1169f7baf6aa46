#pragma once

#include <string>

#include "elq/linalg.hpp"
#include "elq/sampling.hpp"

namespace elq {

/// Outcome of an identity check over sampled points.
struct ResidualReport {
  std::string check_name;
  std::string paper_ref;  ///< the identity checked, as short formula text
  int samples = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;
  SamplePoint worst_point;
  double tol = 0.0;
  bool pass = false;
};

/// pass <=> max_rel < tol.
inline bool residual_pass(double max_rel, double tol) { return max_rel < tol; }

/// Accumulates max over samples of |lhs - rhs|_inf / (1 + |rhs|_inf).
class ResidualAccumulator {
 public:
  ResidualAccumulator(std::string name, std::string ref, double tol);

  void add(const SamplePoint& p, const Matrix& lhs, const Matrix& rhs);
  void add(const SamplePoint& p, cd lhs, cd rhs);
  /// Precomputed absolute error and reference scale.
  void add_error(const SamplePoint& p, double abs_err, double rhs_scale);

  ResidualReport finish() const;

 private:
  ResidualReport r_;
  bool any_ = false;
};

}  // namespace elq
