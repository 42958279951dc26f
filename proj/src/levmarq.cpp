#include "sparsemode/levmarq.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "sparsemode/errors.hpp"
#include "sparsemode/linalg.hpp"

namespace sparsemode {

namespace {

// Stacks the rows of R (columns of R^T) into one vector.
CVector stack_rows(const CMatrix& r) {
  CMatrix rt = r.transpose();
  return Eigen::Map<const CVector>(rt.data(), rt.size());
}

void check_fit_shapes(const CVector& omega, const CMatrix& x, const RVector& times) {
  if (omega.size() < 1) throw DataError("residual: need at least one eigenvalue");
  if (x.rows() < 1 || x.cols() < 1) throw DataError("residual: empty data matrix");
  if (x.cols() != times.size()) {
    throw DataError("residual: data and time grid disagree");
  }
}

// d_j(k) = t_k * exp(omega_j * t_k), the nonzero row of the time-matrix
// derivative for mode j.
CVector derivative_row(Complex omega_j, const RVector& times) {
  CVector d(times.size());
  for (Index k = 0; k < times.size(); ++k) {
    d(k) = times(k) * std::exp(omega_j * times(k));
  }
  if (!d.allFinite()) {
    throw NumericalError("exponential overflow in residual derivative");
  }
  return d;
}

// J column j = -vec((proj d_j) b_j^T) stacked consistently with stack_rows.
CMatrix assemble_jacobian(const CMatrix& b, const CVector& omega, const RVector& times,
                          const CMatrix* left_basis) {
  const Index n = b.rows();
  const Index r = omega.size();
  const Index m = times.size();
  CMatrix jac(n * m, r);
  for (Index j = 0; j < r; ++j) {
    CVector d = derivative_row(omega(j), times);
    if (left_basis != nullptr) {
      d -= (*left_basis) * (left_basis->adjoint() * d);
    }
    for (Index i = 0; i < n; ++i) {
      jac.col(j).segment(i * m, m) = -b(i, j) * d;
    }
  }
  return jac;
}

}  // namespace

CVector residual_varpro(const CVector& omega, const CMatrix& x, const RVector& times,
                        double rtol) {
  check_fit_shapes(omega, x, times);
  const CMatrix t = build_time_matrix(omega, times);
  const CMatrix b = x * pinv_svd(t, rtol);
  return stack_rows(x - b * t);
}

CVector residual_fixed_modes(const CVector& omega, const CMatrix& phi_b,
                             const CMatrix& x, const RVector& times) {
  check_fit_shapes(omega, x, times);
  if (phi_b.rows() != x.rows() || phi_b.cols() != omega.size()) {
    throw DataError("residual: phi_b shape does not match data and eigenvalues");
  }
  const CMatrix t = build_time_matrix(omega, times);
  return stack_rows(x - phi_b * t);
}

CMatrix jacobian_varpro(const CVector& omega, const CMatrix& x, const RVector& times,
                        double rtol) {
  check_fit_shapes(omega, x, times);
  if (!(rtol > 0.0 && rtol < 1.0)) throw DataError("jacobian: rtol must lie in (0, 1)");
  const CMatrix t = build_time_matrix(omega, times);
  // One SVD of T^T supplies both the left basis U and pinv(T) = conj(U) S^-1 V^T.
  Eigen::JacobiSVD<CMatrix> svd(t.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rtol * sv(0) : 0.0;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  if (rank == 0) throw NumericalError("jacobian: time matrix is numerically zero");
  const CMatrix u = svd.matrixU().leftCols(rank);
  const CMatrix pinv_t = u.conjugate() *
                         sv.head(rank).cwiseInverse().asDiagonal() *
                         svd.matrixV().leftCols(rank).transpose();
  const CMatrix b = x * pinv_t;
  return assemble_jacobian(b, omega, times, &u);
}

CMatrix jacobian_fixed_modes(const CVector& omega, const CMatrix& phi_b,
                             const RVector& times, const CMatrix* left_basis) {
  if (omega.size() < 1) throw DataError("jacobian: need at least one eigenvalue");
  if (phi_b.cols() != omega.size()) {
    throw DataError("jacobian: phi_b column count does not match eigenvalues");
  }
  if (times.size() < 1) throw DataError("jacobian: empty time grid");
  if (left_basis != nullptr && left_basis->rows() != times.size()) {
    throw DataError("jacobian: left basis row count does not match time grid");
  }
  return assemble_jacobian(phi_b, omega, times, left_basis);
}

CVector lm_step(const CVector& residual, const CMatrix& jacobian, double nu) {
  if (jacobian.rows() != residual.size()) {
    throw DataError("lm_step: residual length does not match jacobian rows");
  }
  if (jacobian.cols() < 1) throw DataError("lm_step: jacobian has no columns");
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw DataError("lm_step: damping must be finite and nonnegative");
  }
  const Index r = jacobian.cols();
  RVector msq(r);
  for (Index j = 0; j < r; ++j) {
    const double norm = jacobian.col(j).norm();
    msq(j) = norm > 0.0 ? norm * norm : 1.0;
  }
  // Normal equations of the stacked system [J; nu M] delta = -[residual; 0].
  CMatrix h = jacobian.adjoint() * jacobian;
  h.diagonal() += Complex(nu * nu, 0.0) * msq.cast<Complex>();
  Eigen::LDLT<CMatrix> ldlt(h);
  if (nu == 0.0) {
    const RVector diag = ldlt.vectorD().real();
    const double dmax = diag.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(diag.minCoeff() > 1e-12 * dmax)) {
      throw NumericalError("lm_step: rank-deficient system with zero damping");
    }
  } else if (ldlt.info() != Eigen::Success) {
    throw NumericalError("lm_step: factorization failed");
  }
  return ldlt.solve(-(jacobian.adjoint() * residual));
}

std::optional<double> damping_update_ratio(const LmState& state, const CVector& delta,
                                           const CMatrix& jacobian,
                                           const CVector& residual,
                                           double objective_new) {
  if (jacobian.cols() != delta.size()) {
    throw DataError("damping update: delta length does not match jacobian");
  }
  if (jacobian.rows() != residual.size()) {
    throw DataError("damping update: residual length does not match jacobian");
  }
  if (!(state.nu > 0.0)) throw DataError("damping update: nu must be positive");
  RVector msq(jacobian.cols());
  for (Index j = 0; j < jacobian.cols(); ++j) {
    const double norm = jacobian.col(j).norm();
    msq(j) = norm > 0.0 ? norm * norm : 1.0;
  }
  const CVector scaled = (state.nu * state.nu) * msq.cast<Complex>().asDiagonal() * delta;
  const Complex quad = delta.dot(scaled - jacobian.adjoint() * residual);
  // Eigen's dot conjugates its first argument, giving delta^H (...).
  const double denom = quad.real();
  if (!(denom > 0.0)) return std::nullopt;
  const double rho = (state.objective - objective_new) / denom;
  const double shrink = 1.0 - std::pow(2.0 * rho - 1.0, 3.0);
  return state.nu * std::max(1.0 / 3.0, shrink);
}

double damping_update_simple(double nu, bool accepted) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DataError("damping update: nu must be positive and finite");
  }
  return accepted ? nu / 3.0 : nu * 2.0;
}

CVector project_eigenvalues(const CVector& omega, const ConstraintSet& constraint) {
  CVector out = omega;
  switch (constraint.kind) {
    case ConstraintSet::Kind::unconstrained:
      break;
    case ConstraintSet::Kind::imaginary_axis:
      for (Index j = 0; j < out.size(); ++j) out(j) = Complex(0.0, out(j).imag());
      break;
    case ConstraintSet::Kind::left_half_plane:
      for (Index j = 0; j < out.size(); ++j) {
        if (out(j).real() > 0.0) out(j) = Complex(0.0, out(j).imag());
      }
      break;
    case ConstraintSet::Kind::disc: {
      if (!(constraint.radius > 0.0) || !std::isfinite(constraint.radius)) {
        throw DataError("constraint: disc radius must be positive and finite");
      }
      for (Index j = 0; j < out.size(); ++j) {
        const Complex rel = out(j) - constraint.center;
        const double dist = std::abs(rel);
        if (dist > constraint.radius) {
          out(j) = constraint.center + rel * (constraint.radius / dist);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace sparsemode
