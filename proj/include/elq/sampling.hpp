#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "elq/config.hpp"
#include "elq/dynamical.hpp"
#include "elq/weights.hpp"

namespace elq {

/// One sampled evaluation point. Unused coordinates are left at zero.
struct SamplePoint {
  cd z{};
  cd w{};
  WeightVector lambda;
};

/// What a check samples and which lattices its points must avoid.
struct SampleConstraints {
  int arity = 1;                    ///< 1: z only, 2: z and w
  bool with_lambda = true;
  std::vector<Lattice> z_poles;     ///< z must avoid these
  std::vector<Lattice> w_poles;     ///< w must avoid these
  std::vector<Lattice> diff_poles;  ///< z - w must avoid these
  /// lambda_i - lambda_j + k gamma must avoid Z + tau Z for |k| <= this bound.
  int gamma_shift_range = 3;
};

/// Draw cfg.samples points (or `count` when positive). Point i of stream s depends only on
/// (cfg.seed, s, i). z and w are uniform in {a + b tau : a, b in [0, n)}; lambda has
/// coordinates uniform in [-0.5, 0.5] + i[-0.25, 0.25], projected to sum zero.
/// Throws convergence_error when a point cannot be placed within the rejection budget.
std::vector<SamplePoint> sample_points(const ModuliConfig& cfg, const SampleConstraints& constraints,
                                       std::uint64_t stream, int count = 0);

/// Engine for item `index` of `stream`.
std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// A single generic lambda from the given stream (same rejection rule as sample_points).
WeightVector sample_lambda(const ModuliConfig& cfg, std::uint64_t stream, std::uint64_t index);

/// Stream of a named check (FNV-1a of the name).
std::uint64_t stream_for(std::string_view name);

/// Stream identifiers. Each check draws from its own stream; the R^B reference data uses a
/// stream no check uses.
namespace streams {
inline constexpr std::uint64_t kBelavinReference = 0xB0B0;
}

}  // namespace elq
