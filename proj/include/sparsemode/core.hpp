#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sparsemode {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// One data set for fitting: n features observed at m sample times.
// Column k of data is the snapshot taken at times(k).
struct SnapshotSet {
  CMatrix data;   // n x m
  RVector times;  // m, strictly increasing

  Index n() const { return data.rows(); }
  Index m() const { return data.cols(); }
};

// Checks shapes, monotonicity and finiteness, then assembles a SnapshotSet.
// Requires n >= 1, m >= 2, times strictly increasing. Throws DataError.
SnapshotSet validate_snapshots(CMatrix data, RVector times);

// Exponential mode model: data(x, t) ~ sum_j phi_b(x, j) * exp(omega(j) * t).
// phi_b carries amplitude-scaled spatial modes; omega the continuous-time
// eigenvalues. rank == omega.size() == phi_b.cols().
struct DmdModel {
  CVector omega;
  CMatrix phi_b;
  Index rank = 0;
};

// Throws DataError unless rank >= 1, shapes agree, rank <= phi_b.rows(),
// and every entry is finite.
void validate_model(const DmdModel& model);

// Outcome bookkeeping for a fit.
struct FitReport {
  int outer_iterations = 0;        // accepted damped-step count
  double avg_inner_iterations = 0; // mean iterations per mode-update call
  double final_objective = 0;
  bool converged = false;          // outer tolerance met
  bool inner_converged = true;     // false if any mode update hit its cap
  std::vector<bool> global_mask;   // true = mode treated as global
  // Objective after each accepted step, initial value first. Non-increasing.
  std::vector<double> objective_trace;
};

// Evaluates the model on a time grid: phi_b * T where T_jk = exp(omega_j t_k).
CMatrix reconstruct(const DmdModel& model, const RVector& times);

// Splits phi_b into unit-norm columns and their Euclidean norms.
// A zero column stays zero and gets amplitude 0.
std::pair<CMatrix, RVector> split_amplitudes(const CMatrix& phi_b);

// ||estimate - reference||_F / ||reference||_F.
// Throws DataError on shape mismatch or zero reference.
double relative_error(const CMatrix& estimate, const CMatrix& reference);

}  // namespace sparsemode
