#include "elq/config.hpp"

#include <cmath>
#include <string>

#include "elq/errors.hpp"

namespace elq {

void ModuliConfig::validate() const {
  if (n < 2) throw config_error("n must be >= 2, got " + std::to_string(n));
  if (n > 4) throw config_error("n > 4 is outside the supported desk scale");
  if (!(tau.imag() > 0.0)) throw config_error("Im(tau) must be positive");
  if (!std::isfinite(gamma)) throw config_error("gamma must be finite");
  if (!(tol > 0.0)) throw config_error("tol must be positive");
  if (!(series_tol > 0.0)) throw config_error("series_tol must be positive");
  if (!(series_tol < tol)) throw config_error("series_tol must be smaller than tol");
  if (samples <= 0) throw config_error("samples must be positive");
  if (!(pole_delta > 0.0)) throw config_error("pole_delta must be positive");
}

}  // namespace elq
