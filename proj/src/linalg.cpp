#include "sparsemode/linalg.hpp"

#include <Eigen/SVD>

#include "sparsemode/errors.hpp"

namespace sparsemode {

CMatrix build_time_matrix(const CVector& omega, const RVector& times) {
  if (omega.size() < 1) throw DataError("time matrix needs at least one eigenvalue");
  if (times.size() < 1) throw DataError("time matrix needs at least one sample time");
  CMatrix t(omega.size(), times.size());
  for (Index j = 0; j < omega.size(); ++j) {
    for (Index k = 0; k < times.size(); ++k) {
      t(j, k) = std::exp(omega(j) * times(k));
    }
  }
  if (!t.allFinite()) {
    throw NumericalError("exponential overflow while building time matrix");
  }
  return t;
}

CMatrix time_matrix_derivative(const CVector& omega, const RVector& times, Index j) {
  if (j < 0 || j >= omega.size()) {
    throw DataError("time matrix derivative: mode index out of range");
  }
  if (times.size() < 1) throw DataError("time matrix needs at least one sample time");
  CMatrix d = CMatrix::Zero(omega.size(), times.size());
  for (Index k = 0; k < times.size(); ++k) {
    d(j, k) = times(k) * std::exp(omega(j) * times(k));
  }
  if (!d.allFinite()) {
    throw NumericalError("exponential overflow in time matrix derivative");
  }
  return d;
}

CMatrix pinv_svd(const CMatrix& m, double rtol) {
  if (m.size() == 0) throw DataError("pinv_svd: empty matrix");
  if (!(rtol > 0.0 && rtol < 1.0)) throw DataError("pinv_svd: rtol must lie in (0, 1)");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rtol * sv(0) : 0.0;
  RVector inv = RVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

std::pair<Compression, CMatrix> pod_compress(const CMatrix& x, Index p) {
  if (x.size() == 0) throw DataError("pod_compress: empty matrix");
  if (p < 1 || p > std::min(x.rows(), x.cols())) {
    throw DataError("pod_compress: rank must lie in [1, min(n, m)]");
  }
  Eigen::BDCSVD<CMatrix> svd(x, Eigen::ComputeThinU);
  Compression comp;
  comp.c = svd.matrixU().leftCols(p).adjoint();
  comp.p = p;
  CMatrix compressed = comp.c * x;
  return {std::move(comp), std::move(compressed)};
}

double spectral_norm_sq(const CMatrix& a) {
  if (a.size() == 0) throw DataError("spectral_norm_sq: empty matrix");
  Eigen::JacobiSVD<CMatrix> svd(a);
  const double s = svd.singularValues()(0);
  return s * s;
}

}  // namespace sparsemode
