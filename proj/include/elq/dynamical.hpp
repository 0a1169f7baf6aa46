#pragma once

#include <functional>
#include <span>
#include <vector>

#include "elq/config.hpp"
#include "elq/linalg.hpp"
#include "elq/weights.hpp"

namespace elq {

/// A lattice offset + Z + tau Z.
struct Lattice {
  cd offset{0.0, 0.0};
};

/// Matrix-valued function of (z, lambda) with its declared z-pole lattices.
struct DynMatrixEvaluator {
  std::function<Matrix(cd, const WeightVector&)> eval;
  Index dims = 0;
  std::vector<Lattice> pole_lattices;
  bool z_only = false;

  Matrix operator()(cd z, const WeightVector& lambda) const { return eval(z, lambda); }
};

/// lambda -> matrix.
using LambdaMatrix = std::function<Matrix(const WeightVector&)>;

/// Column j of the result is column j of a(lambda + sign * gamma * column_keys[j]).
/// `a` is evaluated once per distinct key.
Matrix apply_dyn_shift(const LambdaMatrix& a, std::span<const WeightKey> column_keys,
                       const WeightVector& lambda, double gamma, int sign = -1);

/// a(lambda - gamma h_l) for the summed weight of `shift_legs` in `layout` (sign -1), or
/// a(lambda + gamma h_l) (sign +1). Throws dimension_error when a shift leg has no weights.
Matrix apply_dyn_shift(const LambdaMatrix& a, std::span<const HModule> layout,
                       std::span<const int> shift_legs, const WeightVector& lambda, double gamma,
                       int sign = -1);

/// Leg-embedded lambda-matrix: lambda -> leg_embed(a(lambda), legs, dims).
LambdaMatrix embedded(LambdaMatrix a, std::vector<int> legs, std::vector<Index> dims);

}  // namespace elq
