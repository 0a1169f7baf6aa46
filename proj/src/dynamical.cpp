#include "elq/dynamical.hpp"

#include <map>

#include "elq/errors.hpp"

namespace elq {

Matrix apply_dyn_shift(const LambdaMatrix& a, std::span<const WeightKey> column_keys,
                       const WeightVector& lambda, double gamma, int sign) {
  std::map<WeightKey, std::vector<Index>> groups;
  for (std::size_t j = 0; j < column_keys.size(); ++j) groups[column_keys[j]].push_back(static_cast<Index>(j));
  Matrix out;
  for (const auto& [key, cols] : groups) {
    const WeightKey k = sign > 0 ? key : -key;
    const Matrix m = a(shifted(lambda, k, gamma));
    if (m.cols() != static_cast<Index>(column_keys.size()))
      throw dimension_error("apply_dyn_shift: column count does not match the weight layout");
    if (out.size() == 0) out = Matrix::Zero(m.rows(), m.cols());
    for (Index j : cols) out.col(j) = m.col(j);
  }
  return out;
}

Matrix apply_dyn_shift(const LambdaMatrix& a, std::span<const HModule> layout,
                       std::span<const int> shift_legs, const WeightVector& lambda, double gamma,
                       int sign) {
  const auto keys = leg_weights(layout, shift_legs, lambda.rank());
  return apply_dyn_shift(a, keys, lambda, gamma, sign);
}

LambdaMatrix embedded(LambdaMatrix a, std::vector<int> legs, std::vector<Index> dims) {
  return [a = std::move(a), legs = std::move(legs), dims = std::move(dims)](const WeightVector& l) {
    return leg_embed(a(l), legs, dims);
  };
}

}  // namespace elq
