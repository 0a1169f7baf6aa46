#include "elq/weights.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "elq/errors.hpp"

namespace elq {

WeightVector::WeightVector(std::vector<cd> coords) : coords_(std::move(coords)) {
  cd sum{};
  double scale = 1.0;
  for (const cd& c : coords_) {
    sum += c;
    scale = std::max(scale, std::abs(c));
  }
  if (std::abs(sum) > 1e-12 * scale) throw domain_error("WeightVector: coordinates must sum to zero");
}

WeightVector WeightVector::projected(std::vector<cd> coords) {
  if (coords.empty()) return WeightVector{};
  cd mean = std::accumulate(coords.begin(), coords.end(), cd{}) / static_cast<double>(coords.size());
  for (cd& c : coords) c -= mean;
  return WeightVector(std::move(coords));
}

WeightVector WeightVector::operator+(const WeightVector& other) const {
  if (rank() != other.rank()) throw dimension_error("WeightVector: rank mismatch");
  std::vector<cd> out(coords_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.coords_[i];
  return WeightVector::projected(std::move(out));
}

WeightVector WeightVector::operator-(const WeightVector& other) const { return *this + other * -1.0; }

WeightVector WeightVector::operator*(cd s) const {
  std::vector<cd> out(coords_);
  for (cd& c : out) c *= s;
  return WeightVector::projected(std::move(out));
}

WeightKey::WeightKey(std::vector<int> a) : a_(std::move(a)) {
  if (a_.empty()) return;
  const int m = *std::min_element(a_.begin(), a_.end());
  for (int& v : a_) v -= m;
}

WeightKey WeightKey::zero(int n) { return WeightKey(std::vector<int>(static_cast<std::size_t>(n), 0)); }

WeightKey WeightKey::omega(int n, int i) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  a[static_cast<std::size_t>(i)] = 1;
  return WeightKey(std::move(a));
}

bool WeightKey::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](int v) { return v == 0; });
}

WeightKey WeightKey::operator+(const WeightKey& other) const {
  if (rank() != other.rank()) throw dimension_error("WeightKey: rank mismatch");
  std::vector<int> out(a_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.a_[i];
  return WeightKey(std::move(out));
}

WeightKey WeightKey::operator-() const {
  std::vector<int> out(a_);
  for (int& v : out) v = -v;
  return WeightKey(std::move(out));
}

WeightKey WeightKey::operator-(const WeightKey& other) const { return *this + (-other); }

WeightVector WeightKey::to_vector() const {
  std::vector<cd> v(a_.size());
  for (std::size_t i = 0; i < a_.size(); ++i) v[i] = static_cast<double>(a_[i]);
  return WeightVector::projected(std::move(v));
}

std::string WeightKey::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a_.size(); ++i) os << (i ? "," : "") << a_[i];
  os << ')';
  return os.str();
}

WeightVector shifted(const WeightVector& lambda, const WeightKey& mu, double gamma) {
  if (mu.is_zero()) return lambda;
  if (lambda.rank() != mu.rank()) throw dimension_error("shifted: rank mismatch");
  const double n = lambda.rank();
  const auto& a = mu.coefficients();
  const double mean = std::accumulate(a.begin(), a.end(), 0.0) / n;
  std::vector<cd> out(lambda.coords());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gamma * (a[i] - mean);
  return WeightVector(std::move(out));
}

HModule HModule::trivial(int n) { return HModule{1, {WeightKey::zero(n)}}; }

HModule HModule::vector_rep(int n) {
  HModule m{n, {}};
  for (int i = 0; i < n; ++i) m.weights.push_back(WeightKey::omega(n, i));
  return m;
}

HModule HModule::dual() const {
  HModule m{dim, {}};
  for (const auto& w : weights) m.weights.push_back(-w);
  return m;
}

HModule tensor(const HModule& a, const HModule& b) {
  HModule out{a.dim * b.dim, {}};
  out.weights.reserve(static_cast<std::size_t>(out.dim));
  for (const auto& wa : a.weights)
    for (const auto& wb : b.weights) out.weights.push_back(wa + wb);
  return out;
}

HModule tensor(std::span<const HModule> factors, int n) {
  HModule out = HModule::trivial(n);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

std::vector<Index> layout_dims(std::span<const HModule> layout) {
  std::vector<Index> dims;
  dims.reserve(layout.size());
  for (const auto& m : layout) dims.push_back(m.dim);
  return dims;
}

std::vector<WeightKey> leg_weights(std::span<const HModule> layout, std::span<const int> legs, int n) {
  const auto dims = layout_dims(layout);
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  std::vector<char> selected(layout.size(), 0);
  for (int l : legs) {
    if (l < 0 || static_cast<std::size_t>(l) >= layout.size()) throw dimension_error("leg_weights: bad leg");
    if (static_cast<Index>(layout[static_cast<std::size_t>(l)].weights.size()) != layout[static_cast<std::size_t>(l)].dim)
      throw dimension_error("leg_weights: leg has undeclared weights");
    selected[static_cast<std::size_t>(l)] = 1;
  }
  std::vector<WeightKey> out(static_cast<std::size_t>(total), WeightKey::zero(n));
  std::vector<Index> idx(layout.size());
  for (Index flat = 0; flat < total; ++flat) {
    Index rest = flat;
    for (std::size_t k = layout.size(); k-- > 0;) {
      idx[k] = rest % dims[k];
      rest /= dims[k];
    }
    WeightKey w = WeightKey::zero(n);
    for (std::size_t k = 0; k < layout.size(); ++k)
      if (selected[k]) w = w + layout[k].weights[static_cast<std::size_t>(idx[k])];
    out[static_cast<std::size_t>(flat)] = std::move(w);
  }
  return out;
}

}  // namespace elq
