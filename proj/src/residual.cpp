#include "elq/residual.hpp"

#include <cmath>
#include <limits>

#include "elq/errors.hpp"

namespace elq {

ResidualAccumulator::ResidualAccumulator(std::string name, std::string ref, double tol) {
  r_.check_name = std::move(name);
  r_.paper_ref = std::move(ref);
  r_.tol = tol;
}

void ResidualAccumulator::add(const SamplePoint& p, const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw dimension_error("residual: shape mismatch in " + r_.check_name);
  add_error(p, max_abs(lhs - rhs), max_abs(rhs));
}

void ResidualAccumulator::add(const SamplePoint& p, cd lhs, cd rhs) {
  add_error(p, std::abs(lhs - rhs), std::abs(rhs));
}

void ResidualAccumulator::add_error(const SamplePoint& p, double abs_err, double rhs_scale) {
  double rel = abs_err / (1.0 + rhs_scale);
  if (!std::isfinite(rel)) {
    abs_err = std::numeric_limits<double>::infinity();
    rel = abs_err;
  }
  ++r_.samples;
  r_.max_abs = std::max(r_.max_abs, abs_err);
  if (!any_ || rel > r_.max_rel) {
    r_.max_rel = rel;
    r_.worst_point = p;
  }
  any_ = true;
}

ResidualReport ResidualAccumulator::finish() const {
  ResidualReport out = r_;
  out.pass = any_ && residual_pass(out.max_rel, out.tol);
  return out;
}

}  // namespace elq
