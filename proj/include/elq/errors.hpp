#pragma once

#include <stdexcept>
#include <string>

namespace elq {

/// Argument outside the mathematical domain (e.g. Im(tau) <= 0).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A theta series needed more terms than the hard truncation cap.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point lies within the pole-exclusion distance of a declared pole lattice.
class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A matrix (or difference operator) that must be inverted is numerically singular.
class singularity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or leg bookkeeping mismatch.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid configuration value (CLI exit code 2).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace elq
