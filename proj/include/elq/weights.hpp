#pragma once

#include <compare>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "elq/config.hpp"
#include "elq/linalg.hpp"

namespace elq {

/// A point of h*: n complex coordinates summing to zero.
class WeightVector {
 public:
  WeightVector() = default;
  /// Throws domain_error unless the coordinates sum to zero within 1e-12 (scaled).
  explicit WeightVector(std::vector<cd> coords);
  /// Projects arbitrary coordinates onto the sum-zero hyperplane.
  static WeightVector projected(std::vector<cd> coords);

  int rank() const { return static_cast<int>(coords_.size()); }
  const std::vector<cd>& coords() const { return coords_; }
  cd operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }

  WeightVector operator+(const WeightVector& other) const;
  WeightVector operator-(const WeightVector& other) const;
  WeightVector operator*(cd s) const;

 private:
  std::vector<cd> coords_;
};

/// Integer combination sum_i a_i omega_i of the weights omega_i = E_ii^* - (1/n) sum_k E_kk^*.
/// Stored normalized (common minimum subtracted) so that equality is exact integer equality.
class WeightKey {
 public:
  WeightKey() = default;
  explicit WeightKey(std::vector<int> a);

  static WeightKey zero(int n);
  /// omega_i (zero-based i).
  static WeightKey omega(int n, int i);

  int rank() const { return static_cast<int>(a_.size()); }
  const std::vector<int>& coefficients() const { return a_; }
  bool is_zero() const;

  WeightKey operator+(const WeightKey& other) const;
  WeightKey operator-() const;
  WeightKey operator-(const WeightKey& other) const;

  /// Coordinates of sum_i a_i omega_i in h*.
  WeightVector to_vector() const;

  std::string to_string() const;

  auto operator<=>(const WeightKey&) const = default;

 private:
  std::vector<int> a_;
};

/// lambda + gamma * mu.
WeightVector shifted(const WeightVector& lambda, const WeightKey& mu, double gamma);

/// Finite-dimensional diagonalizable h-module: one weight per basis vector.
struct HModule {
  Index dim = 1;
  std::vector<WeightKey> weights;

  /// The one-dimensional trivial module (weight zero).
  static HModule trivial(int n);
  /// C^n with basis weights omega_1..omega_n.
  static HModule vector_rep(int n);

  HModule dual() const;
  bool operator==(const HModule&) const = default;
};

/// Tensor product with the first factor as the slow index; weights add.
HModule tensor(const HModule& a, const HModule& b);
HModule tensor(std::span<const HModule> factors, int n);

/// Factor dimensions of a layout.
std::vector<Index> layout_dims(std::span<const HModule> layout);

/// Per basis vector of the full tensor product, the summed weight of the selected legs.
std::vector<WeightKey> leg_weights(std::span<const HModule> layout, std::span<const int> legs, int n);

}  // namespace elq
