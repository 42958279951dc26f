#pragma once

#include <optional>
#include <utility>

#include "sparsemode/core.hpp"
#include "sparsemode/levmarq.hpp"
#include "sparsemode/prox.hpp"

namespace sparsemode {

enum class Method { optdmd, sparse_fista, sparse_sr3 };

struct SolverConfig {
  Method method = Method::optdmd;
  int rank = 1;
  RegularizerSpec regularizer;
  double eta = 1.0;  // SR3 relaxation strength
  ConstraintSet constraint;
  // Feature-space compression for the optimized-DMD eigenvalue loop.
  // Unset: p = min(n, m, max(2 rank, 10)). 0: disabled. Sparse-mode fits
  // never compress.
  std::optional<Index> compression_rank;
  double outer_tol = 1e-6;
  int outer_max_iter = 200;
  double inner_tol = 1e-6;
  int inner_max_iter = 1000;
  double tau_active = 0.1;
  double tau_global = 0.5;
  bool global_local_enabled = true;
  // SR3 path: build the eigenvalue Jacobian with the range-complement
  // projector, matching the de-biased mode updates.
  bool debiased_jacobian = true;
  std::optional<CVector> init_omega;
  unsigned long seed = 0;
  double pinv_rtol = 1e-12;
};

// Eigenvalue initializer: projects the data onto p leading modes (default
// p = rank), fits a one-step linear propagator between consecutive projected
// snapshots by least squares over one median time gap, and returns
// log(eigenvalues) / median_gap, sorted by imaginary part ascending.
// Requires rank <= p <= min(n, m) and rank <= min(n, m - 1).
CVector init_eigenvalues(const SnapshotSet& snapshots, int rank,
                         std::optional<Index> p = std::nullopt);

// Unregularized variable-projection fit with gain-ratio damping, optional
// compression and eigenvalue constraints. Spatial modes come from the full
// data at the final eigenvalues. Eigenvalues are sorted by imaginary part
// (ties by real part); mode columns follow.
std::pair<DmdModel, FitReport> fit_optimized_dmd(const SnapshotSet& snapshots,
                                                 const SolverConfig& config);

// Result of one inner mode solve.
struct ModeUpdateResult {
  CMatrix phi_b;
  CMatrix w;  // SR3 sparse iterate; equals phi_b for the other updaters
  int iterations = 0;
  bool converged = false;
};

// Accelerated proximal-gradient solve of the mode subproblem at fixed omega,
// warm-started from phi0. Step 1 / ||A||_2^2 with A = T(omega)^T; momentum
// restarts whenever the regularized objective increases. Stops when the
// relative Frobenius change drops below inner_tol; if the cap is hit, the
// best iterate seen is returned with converged = false.
ModeUpdateResult fista_mode_update(const CMatrix& phi0, const CVector& omega,
                                   const SnapshotSet& snapshots,
                                   const RegularizerSpec& spec,
                                   const GlobalLocalMask& mask, double inner_tol,
                                   int inner_max_iter);

// Relax-and-threshold solve of the mode subproblem: alternates a ridge-like
// row solve (one factorization shared by all rows) with W = prox_eta(phi)
// until W stabilizes, then de-biases each row by least squares restricted to
// its active columns (W nonzero, plus all global columns); inactive entries
// are exactly zero.
ModeUpdateResult sr3_mode_update(const CMatrix& phi0, const CVector& omega,
                                 const SnapshotSet& snapshots,
                                 const RegularizerSpec& spec,
                                 const GlobalLocalMask& mask, double eta,
                                 double inner_tol, int inner_max_iter);

// A mode is global when strictly more than tau_global * n of its entries
// exceed tau_active times the largest magnitude in phi_b. An all-zero phi_b
// yields all-local.
GlobalLocalMask detect_global_modes(const CMatrix& phi_b, double tau_active,
                                    double tau_global);

// Sparsity-promoting fit: alternates damped eigenvalue steps (fixed-mode
// residual, simple damping) with FISTA or SR3 mode updates; a candidate is
// accepted when it lowers the penalized objective
// ||residual||^2 + penalty(phi_b). The global/local mask is recomputed from
// the current modes once per outer iteration and frozen within it.
std::pair<DmdModel, FitReport> fit_sparse_mode_dmd(const SnapshotSet& snapshots,
                                                   const SolverConfig& config);

// Dispatch on config.method.
std::pair<DmdModel, FitReport> fit(const SnapshotSet& snapshots,
                                   const SolverConfig& config);

}  // namespace sparsemode
