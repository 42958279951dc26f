#include "sparsemode/core.hpp"

#include <cmath>

#include "sparsemode/errors.hpp"
#include "sparsemode/linalg.hpp"

namespace sparsemode {

SnapshotSet validate_snapshots(CMatrix data, RVector times) {
  if (data.rows() < 1) throw DataError("snapshot set needs at least one feature row");
  if (data.cols() < 2) throw DataError("snapshot set needs at least two snapshots");
  if (times.size() != data.cols()) {
    throw DataError("time grid length does not match snapshot count");
  }
  if (!data.allFinite()) throw DataError("snapshot data contains non-finite entries");
  if (!times.allFinite()) throw DataError("time grid contains non-finite entries");
  for (Index k = 1; k < times.size(); ++k) {
    if (!(times(k) > times(k - 1))) {
      throw DataError("time grid must be strictly increasing");
    }
  }
  return SnapshotSet{std::move(data), std::move(times)};
}

void validate_model(const DmdModel& model) {
  if (model.rank < 1) throw DataError("model rank must be at least 1");
  if (model.omega.size() != model.rank) {
    throw DataError("model omega length does not match rank");
  }
  if (model.phi_b.cols() != model.rank) {
    throw DataError("model phi_b column count does not match rank");
  }
  if (model.phi_b.rows() < model.rank) {
    throw DataError("model rank exceeds feature count");
  }
  if (!model.omega.allFinite() || !model.phi_b.allFinite()) {
    throw DataError("model contains non-finite entries");
  }
}

CMatrix reconstruct(const DmdModel& model, const RVector& times) {
  validate_model(model);
  if (times.size() < 1) throw DataError("reconstruction needs a nonempty time grid");
  if (!times.allFinite()) throw DataError("time grid contains non-finite entries");
  return model.phi_b * build_time_matrix(model.omega, times);
}

std::pair<CMatrix, RVector> split_amplitudes(const CMatrix& phi_b) {
  CMatrix phi = phi_b;
  RVector b(phi_b.cols());
  for (Index j = 0; j < phi_b.cols(); ++j) {
    const double norm = phi_b.col(j).norm();
    b(j) = norm;
    if (norm > 0) phi.col(j) /= norm;
  }
  return {std::move(phi), std::move(b)};
}

double relative_error(const CMatrix& estimate, const CMatrix& reference) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols()) {
    throw DataError("relative_error: shape mismatch");
  }
  const double ref_norm = reference.norm();
  if (ref_norm == 0) throw DataError("relative_error: reference has zero norm");
  return (estimate - reference).norm() / ref_norm;
}

}  // namespace sparsemode
