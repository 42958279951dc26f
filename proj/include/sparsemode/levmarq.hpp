#pragma once

#include <optional>

#include "sparsemode/core.hpp"

namespace sparsemode {

// One iterate of the damped least-squares eigenvalue loop.
struct LmState {
  CVector omega;
  double nu = 1.0;
  double objective = 0.0;
  int iteration = 0;
};

// Feasible region for eigenvalues, applied by entrywise Euclidean projection.
struct ConstraintSet {
  enum class Kind { unconstrained, imaginary_axis, left_half_plane, disc };

  Kind kind = Kind::unconstrained;
  Complex center{0.0, 0.0};  // disc only
  double radius = 0.0;       // disc only

  static ConstraintSet unconstrained() { return {}; }
  static ConstraintSet imaginary_axis() { return {Kind::imaginary_axis}; }
  static ConstraintSet left_half_plane() { return {Kind::left_half_plane}; }
  static ConstraintSet disc(Complex center, double radius) {
    return {Kind::disc, center, radius};
  }
};

// Variable-projection residual: with T = T(omega) and B = X pinv(T), the
// residual matrix is X - B T; the returned vector stacks its rows
// (columns of (X - B T)^T), length n * m.
CVector residual_varpro(const CVector& omega, const CMatrix& x, const RVector& times,
                        double rtol);

// Residual with the spatial modes held fixed: stacks rows of X - phi_b T.
CVector residual_fixed_modes(const CVector& omega, const CMatrix& phi_b,
                             const CMatrix& x, const RVector& times);

// Jacobian of the variable-projection residual in omega (one column per
// mode). Uses the standard first-order approximation: column j is
// -vec((P d_j) b_j^T) with b_j = (X pinv(T)) col j, d_j(k) = t_k e^{omega_j t_k},
// and P the projector onto the orthogonal complement of the range of T^T.
CMatrix jacobian_varpro(const CVector& omega, const CMatrix& x, const RVector& times,
                        double rtol);

// Exact Jacobian of the fixed-mode residual. When left_basis (orthonormal
// columns, m x k) is supplied, each derivative vector d_j is replaced by
// (I - U U*) d_j, matching de-biased mode updates.
CMatrix jacobian_fixed_modes(const CVector& omega, const CMatrix& phi_b,
                             const RVector& times, const CMatrix* left_basis = nullptr);

// Solves the damped step: minimizes ||residual + J delta||^2 + nu^2 ||M delta||^2
// where M is diagonal with M_jj = ||J col j||_2 (1 for a zero column).
// With nu = 0 a rank-deficient system raises NumericalError.
CVector lm_step(const CVector& residual, const CMatrix& jacobian, double nu);

// Gain-ratio damping update. Returns the new nu on success; empty when the
// predicted-reduction denominator is not positive (caller doubles nu instead).
std::optional<double> damping_update_ratio(const LmState& state, const CVector& delta,
                                           const CMatrix& jacobian,
                                           const CVector& residual,
                                           double objective_new);

// Simple damping update: divide by 3 on acceptance, double on rejection.
double damping_update_simple(double nu, bool accepted);

// Entrywise projection of eigenvalues onto the constraint set.
CVector project_eigenvalues(const CVector& omega, const ConstraintSet& constraint);

}  // namespace sparsemode
