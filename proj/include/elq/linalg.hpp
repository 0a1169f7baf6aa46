#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "elq/config.hpp"

namespace elq {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Largest entry modulus (the entrywise infinity norm used by residuals).
double max_abs(const Matrix& m);

/// The Heisenberg pair: A = diag(1, xi, ..., xi^{n-1}), B the cyclic shift with B e_{j+1} = e_j.
struct HeisenbergPair {
  Matrix A;
  Matrix B;
};
HeisenbergPair heisenberg_A_B(int n);

/// Elementary matrix E_ij of size n (zero-based indices).
Matrix elementary(int n, int i, int j);

/// Flip map x (x) y -> y (x) x on C^a (x) C^b.
Matrix permutation(Index a, Index b);

/// Kronecker product, first factor slow.
Matrix kron(const Matrix& a, const Matrix& b);

/// Embed `m`, an operator on the ordered factors `legs` of a tensor product with factor
/// dimensions `space_dims`, into the full space (identity on the remaining factors).
/// Rectangular operators are allowed: `out_dims` gives the target dimension of each leg in
/// `legs` (defaults to the source dimensions).
Matrix leg_embed(const Matrix& m, std::span<const int> legs, std::span<const Index> space_dims);
Matrix leg_embed(const Matrix& m, std::span<const int> legs, std::span<const Index> space_dims,
                 std::span<const Index> out_dims);

/// Transpose in the second factor of C^a (x) C^b.
Matrix partial_transpose_second(const Matrix& m, Index a, Index b);

/// Inverse through a pivoted LU; throws singularity_error when the reciprocal condition
/// estimate falls below `rcond_min`.
Matrix checked_inverse(const Matrix& m, double rcond_min = 1e-13);

}  // namespace elq
