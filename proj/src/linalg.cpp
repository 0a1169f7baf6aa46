#include "elq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "elq/errors.hpp"

namespace elq {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

HeisenbergPair heisenberg_A_B(int n) {
  const cd xi = std::polar(1.0, 2.0 * std::numbers::pi / n);
  HeisenbergPair p{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  cd power{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    p.A(k, k) = power;
    power *= xi;
    p.B(k, (k + 1) % n) = 1.0;
  }
  return p;
}

Matrix elementary(int n, int i, int j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Matrix permutation(Index a, Index b) {
  Matrix p = Matrix::Zero(a * b, a * b);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < b; ++j) p(j * a + i, i * b + j) = 1.0;
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

// Row-major multi-index decomposition with the first factor slowest.
void decompose(Index flat, std::span<const Index> dims, std::vector<Index>& idx) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = flat % dims[k];
    flat /= dims[k];
  }
}

Index compose_index(const std::vector<Index>& idx, std::span<const Index> dims) {
  Index flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
  return flat;
}

}  // namespace

Matrix leg_embed(const Matrix& m, std::span<const int> legs, std::span<const Index> space_dims) {
  return leg_embed(m, legs, space_dims, {});
}

Matrix leg_embed(const Matrix& m, std::span<const int> legs, std::span<const Index> space_dims,
                 std::span<const Index> out_dims) {
  const std::size_t nlegs = space_dims.size();
  std::vector<Index> in_dims(space_dims.begin(), space_dims.end());
  std::vector<Index> tgt_dims = in_dims;
  std::vector<char> used(nlegs, 0);
  Index sub_in = 1;
  Index sub_out = 1;
  for (std::size_t k = 0; k < legs.size(); ++k) {
    const int leg = legs[k];
    if (leg < 0 || static_cast<std::size_t>(leg) >= nlegs || used[leg])
      throw dimension_error("leg_embed: invalid or repeated leg " + std::to_string(leg));
    used[leg] = 1;
    if (!out_dims.empty()) tgt_dims[leg] = out_dims[k];
    sub_in *= in_dims[leg];
    sub_out *= tgt_dims[leg];
  }
  if (!out_dims.empty() && out_dims.size() != legs.size())
    throw dimension_error("leg_embed: out_dims must match legs");
  if (m.rows() != sub_out || m.cols() != sub_in)
    throw dimension_error("leg_embed: operator shape does not match the selected legs");

  const Index total_in = std::accumulate(in_dims.begin(), in_dims.end(), Index{1}, std::multiplies<>());
  const Index total_out = std::accumulate(tgt_dims.begin(), tgt_dims.end(), Index{1}, std::multiplies<>());
  Matrix out = Matrix::Zero(total_out, total_in);

  std::vector<Index> col_idx(nlegs), row_idx(nlegs), sub_col(legs.size()), sub_row(legs.size());
  std::vector<Index> leg_in(legs.size()), leg_out(legs.size());
  for (std::size_t k = 0; k < legs.size(); ++k) {
    leg_in[k] = in_dims[legs[k]];
    leg_out[k] = tgt_dims[legs[k]];
  }
  for (Index col = 0; col < total_in; ++col) {
    decompose(col, in_dims, col_idx);
    for (std::size_t k = 0; k < legs.size(); ++k) sub_col[k] = col_idx[legs[k]];
    const Index c = compose_index(sub_col, leg_in);
    row_idx = col_idx;
    for (Index r = 0; r < sub_out; ++r) {
      const cd v = m(r, c);
      if (v == cd{}) continue;
      decompose(r, leg_out, sub_row);
      for (std::size_t k = 0; k < legs.size(); ++k) row_idx[legs[k]] = sub_row[k];
      out(compose_index(row_idx, tgt_dims), col) = v;
    }
  }
  return out;
}

Matrix partial_transpose_second(const Matrix& m, Index a, Index b) {
  if (m.rows() != a * b || m.cols() != a * b)
    throw dimension_error("partial_transpose_second: shape mismatch");
  Matrix out(a * b, a * b);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < b; ++j)
      for (Index k = 0; k < a; ++k)
        for (Index l = 0; l < b; ++l) out(i * b + l, k * b + j) = m(i * b + j, k * b + l);
  return out;
}

Matrix checked_inverse(const Matrix& m, double rcond_min) {
  if (m.rows() != m.cols()) throw dimension_error("checked_inverse: matrix is not square");
  Eigen::PartialPivLU<Matrix> lu(m);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = diag.size() ? diag.minCoeff() / std::max(diag.maxCoeff(), 1e-300) : 1.0;
  const double rc = std::min(lu.rcond(), pivot_ratio);
  if (!(rc > rcond_min) || !std::isfinite(rc))
    throw singularity_error("matrix is numerically singular (rcond=" + std::to_string(rc) + ")");
  return lu.inverse();
}

}  // namespace elq
