#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sparsemode/core.hpp"

namespace sparsemode {

// 20-byte header of the binary matrix formats: 4-byte magic ("CMX1" complex,
// "RMX1" real), then row and column counts as unsigned 64-bit little-endian.
// The payload is row-major with little-endian 64-bit float entries, complex
// entries real part first. Time grids are RMX1 with cols = 1.
struct MatrixFileHeader {
  char magic[4];
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

// One parsed matrix file, tagged by its magic.
struct MatrixFile {
  bool is_complex = true;
  CMatrix cdata;  // set when is_complex
  RMatrix rdata;  // set otherwise

  // Widens a real payload with zero imaginary parts.
  CMatrix as_complex() const;
  // Throws DataError if the payload is complex with any nonzero imaginary part.
  RMatrix as_real() const;
};

void write_matrix(const std::string& path, const CMatrix& matrix);
void write_matrix(const std::string& path, const RMatrix& matrix);

// Reads either binary format, dispatching on the magic. Throws DataError on
// an unknown magic or when the payload length disagrees with the header.
MatrixFile read_matrix(const std::string& path);

// Rectangular CSV of real ("1.5") or complex ("a+bi" / "a-bi") cells.
// Throws DataError on ragged rows or unparseable cells, naming the location.
CMatrix read_csv_matrix(const std::string& path);

// Binary when the file starts with a known magic, CSV otherwise.
MatrixFile read_any_matrix(const std::string& path);

// JSON model document, format_version "1": rank, omega as [re, im] pairs,
// amplitudes b, row-major unit-ish modes phi, global mask, fit report.
// Numbers carry 17 significant digits; each stored amplitude is a power of
// two near the column norm, so phi * diag(b) reproduces the original phi_b
// bit-exactly on read.
void write_model(const std::string& path, const DmdModel& model,
                 const FitReport& report);
std::pair<DmdModel, FitReport> read_model(const std::string& path);

struct SweepRow {
  double lambda = 0;
  double rel_error = 0;
  double nonzero_fraction = 0;
  Index n_global = 0;
};

// CSV with header "lambda,rel_error,nonzero_fraction,n_global"; one row per
// sweep point in input order. Throws DataError when rows is empty.
void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace sparsemode
