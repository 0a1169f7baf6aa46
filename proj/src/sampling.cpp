#include "elq/sampling.hpp"

#include <random>

#include "elq/errors.hpp"
#include "elq/theta.hpp"

namespace elq {
namespace {

constexpr int kRejectionBudget = 1000;

}  // namespace

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

bool avoids(cd p, const std::vector<Lattice>& lattices, const ModuliConfig& cfg) {
  for (const auto& lat : lattices)
    if (lattice_distance(p, lat.offset, cfg.tau) < cfg.pole_delta) return false;
  return true;
}

cd cell_point(std::mt19937_64& eng, const ModuliConfig& cfg) {
  std::uniform_real_distribution<double> u(0.0, static_cast<double>(cfg.n));
  const double a = u(eng);
  const double b = u(eng);
  return a + b * cfg.tau;
}

bool lambda_generic(const WeightVector& l, const ModuliConfig& cfg, int range) {
  for (int i = 0; i < l.rank(); ++i)
    for (int j = 0; j < l.rank(); ++j) {
      if (i == j) continue;
      for (int k = -range; k <= range; ++k)
        if (lattice_distance(l[i] - l[j] + static_cast<double>(k) * cfg.gamma, 0.0, cfg.tau) < cfg.pole_delta)
          return false;
    }
  return true;
}

WeightVector draw_lambda(std::mt19937_64& eng, const ModuliConfig& cfg, int range) {
  std::uniform_real_distribution<double> re(-0.5, 0.5);
  std::uniform_real_distribution<double> im(-0.25, 0.25);
  for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
    std::vector<cd> c(static_cast<std::size_t>(cfg.n));
    for (auto& v : c) {
      const double a = re(eng);
      const double b = im(eng);
      v = cd(a, b);
    }
    auto l = WeightVector::projected(std::move(c));
    if (lambda_generic(l, cfg, range)) return l;
  }
  throw convergence_error("sample_points: rejection budget exceeded for lambda");
}

}  // namespace

std::vector<SamplePoint> sample_points(const ModuliConfig& cfg, const SampleConstraints& constraints,
                                       std::uint64_t stream, int count) {
  cfg.validate();
  const int total = count > 0 ? count : cfg.samples;
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    auto eng = sample_engine(cfg.seed, stream, static_cast<std::uint64_t>(i));
    SamplePoint p;
    bool placed = false;
    for (int attempt = 0; attempt < kRejectionBudget && !placed; ++attempt) {
      p.z = cell_point(eng, cfg);
      if (!avoids(p.z, constraints.z_poles, cfg)) continue;
      if (constraints.arity >= 2) {
        p.w = cell_point(eng, cfg);
        if (!avoids(p.w, constraints.w_poles, cfg)) continue;
        if (!avoids(p.z - p.w, constraints.diff_poles, cfg)) continue;
      }
      placed = true;
    }
    if (!placed) throw convergence_error("sample_points: rejection budget exceeded for z/w");
    if (constraints.with_lambda) p.lambda = draw_lambda(eng, cfg, constraints.gamma_shift_range);
    else p.lambda = WeightVector::projected(std::vector<cd>(static_cast<std::size_t>(cfg.n)));
    out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t stream_for(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

WeightVector sample_lambda(const ModuliConfig& cfg, std::uint64_t stream, std::uint64_t index) {
  auto eng = sample_engine(cfg.seed, stream, index);
  return draw_lambda(eng, cfg, 3);
}

}  // namespace elq
