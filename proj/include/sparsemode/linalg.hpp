#pragma once

#include "sparsemode/core.hpp"

namespace sparsemode {

// T_jk = exp(omega_j * t_k), shape r x m.
// Throws NumericalError if any exponential overflows to a non-finite value.
CMatrix build_time_matrix(const CVector& omega, const RVector& times);

// Derivative of the time matrix in omega_j: zero except row j, which holds
// t_k * exp(omega_j * t_k).
CMatrix time_matrix_derivative(const CVector& omega, const RVector& times, Index j);

// Moore-Penrose pseudoinverse. Singular values at or below rtol times the
// largest are treated as zero. rtol must lie in (0, 1).
CMatrix pinv_svd(const CMatrix& m, double rtol);

// Projection onto the leading p left singular directions of a data matrix.
struct Compression {
  CMatrix c;  // p x n, rows are conj-transposed left singular vectors
  Index p = 0;
};

// Computes the compression for X (n x m) and applies it: returns (C, C * X).
// Requires 1 <= p <= min(n, m).
std::pair<Compression, CMatrix> pod_compress(const CMatrix& x, Index p);

// Squared spectral norm (largest singular value squared).
double spectral_norm_sq(const CMatrix& a);

}  // namespace sparsemode
