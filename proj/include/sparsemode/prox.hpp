#pragma once

#include "sparsemode/core.hpp"

namespace sparsemode {

// Entrywise penalty applied to local spatial modes.
enum class PenaltyKind { none, l0, l1, l0_plus_l2sq, l1_plus_l2sq };

struct RegularizerSpec {
  PenaltyKind kind = PenaltyKind::none;
  double lambda1 = 0.0;
  double lambda2 = 0.0;  // quadratic part, used by the *_plus_l2sq kinds
};

// Throws DataError unless both strengths are finite and nonnegative.
void validate_regularizer(const RegularizerSpec& spec);

// Per-mode classification. Global modes bypass the prox and contribute no
// penalty; local modes are sparsified entrywise.
struct GlobalLocalMask {
  std::vector<bool> is_global;

  static GlobalLocalMask all_local(Index r) {
    return GlobalLocalMask{std::vector<bool>(static_cast<std::size_t>(r), false)};
  }
  Index count_global() const {
    Index c = 0;
    for (bool g : is_global) c += g ? 1 : 0;
    return c;
  }
};

// Scaled proximal map of the penalty at one entry:
// argmin_x |x - y|^2 / (2 step) + psi(x). step must be positive.
// Magnitude ties at the l0-style thresholds resolve to 0.
Complex prox_scalar(const RegularizerSpec& spec, double step, Complex y);

// Column-wise prox: global columns pass through unchanged, local columns get
// prox_scalar entrywise. mask length must equal y.cols().
CMatrix prox_matrix(const RegularizerSpec& spec, double step, const CMatrix& y,
                    const GlobalLocalMask& mask);

// Objective the prox minimizes, evaluated at a candidate x.
double prox_objective(const RegularizerSpec& spec, double step, Complex y, Complex x);

// Penalty value psi at one entry (unscaled by any step).
double penalty_scalar(const RegularizerSpec& spec, Complex x);

// Total penalty over local columns of phi_b; global columns contribute zero.
double penalty_matrix(const RegularizerSpec& spec, const CMatrix& phi_b,
                      const GlobalLocalMask& mask);

}  // namespace sparsemode
