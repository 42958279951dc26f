#include "sparsemode/prox.hpp"

#include <cmath>

#include "sparsemode/errors.hpp"

namespace sparsemode {

void validate_regularizer(const RegularizerSpec& spec) {
  if (!std::isfinite(spec.lambda1) || spec.lambda1 < 0.0) {
    throw DataError("regularizer: lambda1 must be finite and nonnegative");
  }
  if (!std::isfinite(spec.lambda2) || spec.lambda2 < 0.0) {
    throw DataError("regularizer: lambda2 must be finite and nonnegative");
  }
}

namespace {

void check_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DataError("prox: step must be positive and finite");
  }
}

}  // namespace

Complex prox_scalar(const RegularizerSpec& spec, double step, Complex y) {
  validate_regularizer(spec);
  check_step(step);
  const double t1 = step * spec.lambda1;
  const double t2 = step * spec.lambda2;
  const double mag = std::abs(y);
  switch (spec.kind) {
    case PenaltyKind::none:
      return y;
    case PenaltyKind::l1:
      return mag > t1 ? (y / mag) * (mag - t1) : Complex(0, 0);
    case PenaltyKind::l0:
      return mag * mag > 2.0 * t1 ? y : Complex(0, 0);
    case PenaltyKind::l0_plus_l2sq:
      return mag * mag > 2.0 * t1 * (1.0 + 2.0 * t2) ? y / (1.0 + 2.0 * t2)
                                                     : Complex(0, 0);
    case PenaltyKind::l1_plus_l2sq:
      return mag > t1 ? (y / mag) * ((mag - t1) / (1.0 + 2.0 * t2)) : Complex(0, 0);
  }
  throw DataError("prox: unknown penalty kind");
}

CMatrix prox_matrix(const RegularizerSpec& spec, double step, const CMatrix& y,
                    const GlobalLocalMask& mask) {
  validate_regularizer(spec);
  check_step(step);
  if (static_cast<Index>(mask.is_global.size()) != y.cols()) {
    throw DataError("prox_matrix: mask length does not match column count");
  }
  CMatrix out = y;
  for (Index j = 0; j < y.cols(); ++j) {
    if (mask.is_global[static_cast<std::size_t>(j)]) continue;
    for (Index i = 0; i < y.rows(); ++i) {
      out(i, j) = prox_scalar(spec, step, y(i, j));
    }
  }
  return out;
}

double penalty_scalar(const RegularizerSpec& spec, Complex x) {
  validate_regularizer(spec);
  const double mag = std::abs(x);
  switch (spec.kind) {
    case PenaltyKind::none:
      return 0.0;
    case PenaltyKind::l1:
      return spec.lambda1 * mag;
    case PenaltyKind::l0:
      return x != Complex(0, 0) ? spec.lambda1 : 0.0;
    case PenaltyKind::l0_plus_l2sq:
      return (x != Complex(0, 0) ? spec.lambda1 : 0.0) + spec.lambda2 * mag * mag;
    case PenaltyKind::l1_plus_l2sq:
      return spec.lambda1 * mag + spec.lambda2 * mag * mag;
  }
  throw DataError("prox: unknown penalty kind");
}

double prox_objective(const RegularizerSpec& spec, double step, Complex y, Complex x) {
  check_step(step);
  return std::norm(x - y) / (2.0 * step) + penalty_scalar(spec, x);
}

double penalty_matrix(const RegularizerSpec& spec, const CMatrix& phi_b,
                      const GlobalLocalMask& mask) {
  validate_regularizer(spec);
  if (static_cast<Index>(mask.is_global.size()) != phi_b.cols()) {
    throw DataError("penalty_matrix: mask length does not match column count");
  }
  double total = 0.0;
  for (Index j = 0; j < phi_b.cols(); ++j) {
    if (mask.is_global[static_cast<std::size_t>(j)]) continue;
    for (Index i = 0; i < phi_b.rows(); ++i) {
      total += penalty_scalar(spec, phi_b(i, j));
    }
  }
  return total;
}

}  // namespace sparsemode
