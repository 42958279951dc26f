#include "sparsemode/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sparsemode/errors.hpp"

namespace sparsemode {

namespace {

void append_u64le(std::string& buf, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    buf.push_back(static_cast<char>((v >> (8 * k)) & 0xFFu));
  }
}

void append_f64le(std::string& buf, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  append_u64le(buf, bits);
}

std::uint64_t take_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  return v;
}

double take_f64le(const unsigned char* p) {
  const std::uint64_t bits = take_u64le(p);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("cannot read file: " + path);
  return std::move(ss).str();
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out.good()) throw DataError("failed writing file: " + path);
}

void write_binary_matrix(const std::string& path, const char* magic, Index rows,
                         Index cols, bool is_complex, const Complex* cptr,
                         const double* rptr) {
  std::string buf;
  const std::uint64_t entry = is_complex ? 16 : 8;
  buf.reserve(20 + static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) *
                       entry);
  buf.append(magic, 4);
  append_u64le(buf, static_cast<std::uint64_t>(rows));
  append_u64le(buf, static_cast<std::uint64_t>(cols));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (is_complex) {
        const Complex z = cptr[j * rows + i];  // column-major storage
        append_f64le(buf, z.real());
        append_f64le(buf, z.imag());
      } else {
        append_f64le(buf, rptr[j * rows + i]);
      }
    }
  }
  write_file_bytes(path, buf);
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& text, Index row, Index col) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects leading '+'
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw DataError("csv: unparseable cell at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1) + ": '" + text + "'");
  }
  return value;
}

Complex parse_cell(std::string cell, Index row, Index col) {
  // Trim whitespace and a stray carriage return.
  const auto notspace = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!cell.empty() && !notspace(cell.front())) cell.erase(cell.begin());
  while (!cell.empty() && !notspace(cell.back())) cell.pop_back();
  if (cell.empty()) {
    throw DataError("csv: empty cell at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1));
  }
  if (cell.back() != 'i') return Complex(parse_number(cell, row, col), 0.0);

  const std::string body = cell.substr(0, cell.size() - 1);
  // Split at the last sign that is not an exponent sign and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t q = body.size(); q-- > 1;) {
    if ((body[q] == '+' || body[q] == '-') && body[q - 1] != 'e' && body[q - 1] != 'E') {
      split = q;
      break;
    }
  }
  auto signed_unit_or_number = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_number(s, row, col);
  };
  if (split == std::string::npos) {
    return Complex(0.0, signed_unit_or_number(body));  // pure imaginary
  }
  const double re = parse_number(body.substr(0, split), row, col);
  const double im = signed_unit_or_number(body.substr(split));
  return Complex(re, im);
}

// [re, im] pair from a JSON array node.
Complex json_pair(const nlohmann::json& node) {
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() ||
      !node[1].is_number()) {
    throw DataError("model document: expected a [re, im] pair");
  }
  return Complex(node[0].get<double>(), node[1].get<double>());
}

// Column scale for the model document. A power of two near the column
// amplitude divides out of every entry exactly, so the reader's q * scale
// product reproduces phi_b bit for bit. Columns where that still fails
// (subnormal or near-overflow entries) fall back to scale 1.
double column_scale(const CMatrix& phi_b, Index j) {
  const double norm = phi_b.col(j).norm();
  if (norm == 0.0) return 0.0;
  const double scale = std::exp2(std::floor(std::log2(norm)));
  for (Index i = 0; i < phi_b.rows(); ++i) {
    const double parts[2] = {phi_b(i, j).real(), phi_b(i, j).imag()};
    for (const double part : parts) {
      const double q = part / scale;
      if (!(q * scale == part)) return 1.0;
    }
  }
  return scale;
}

}  // namespace

CMatrix MatrixFile::as_complex() const {
  if (is_complex) return cdata;
  return rdata.cast<Complex>();
}

RMatrix MatrixFile::as_real() const {
  if (!is_complex) return rdata;
  for (Index j = 0; j < cdata.cols(); ++j) {
    for (Index i = 0; i < cdata.rows(); ++i) {
      if (cdata(i, j).imag() != 0.0) {
        throw DataError("matrix file holds complex values where reals are required");
      }
    }
  }
  return cdata.real();
}

void write_matrix(const std::string& path, const CMatrix& matrix) {
  write_binary_matrix(path, "CMX1", matrix.rows(), matrix.cols(),
                      /*is_complex=*/true, matrix.data(), nullptr);
}

void write_matrix(const std::string& path, const RMatrix& matrix) {
  write_binary_matrix(path, "RMX1", matrix.rows(), matrix.cols(),
                      /*is_complex=*/false, nullptr, matrix.data());
}

MatrixFile read_matrix(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() < 20) throw DataError("matrix file truncated before header: " + path);
  const bool is_complex = bytes.compare(0, 4, "CMX1") == 0;
  if (!is_complex && bytes.compare(0, 4, "RMX1") != 0) {
    throw DataError("matrix file has unknown magic: " + path);
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t rows = take_u64le(p + 4);
  const std::uint64_t cols = take_u64le(p + 12);
  const std::uint64_t entry = is_complex ? 16 : 8;
  const std::uint64_t max_index =
      static_cast<std::uint64_t>(std::numeric_limits<Index>::max());
  if (rows > max_index || cols > max_index ||
      (rows != 0 && cols > (std::numeric_limits<std::uint64_t>::max() / entry) / rows)) {
    throw DataError("matrix file dimensions overflow: " + path);
  }
  const std::uint64_t payload = rows * cols * entry;
  if (bytes.size() - 20 != payload) {
    throw DataError("matrix file payload length mismatch: " + path);
  }

  MatrixFile out;
  out.is_complex = is_complex;
  const unsigned char* q = p + 20;
  if (is_complex) {
    out.cdata.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::uint64_t i = 0; i < rows; ++i) {
      for (std::uint64_t j = 0; j < cols; ++j) {
        const double re = take_f64le(q);
        const double im = take_f64le(q + 8);
        q += 16;
        out.cdata(static_cast<Index>(i), static_cast<Index>(j)) = Complex(re, im);
      }
    }
  } else {
    out.rdata.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::uint64_t i = 0; i < rows; ++i) {
      for (std::uint64_t j = 0; j < cols; ++j) {
        out.rdata(static_cast<Index>(i), static_cast<Index>(j)) = take_f64le(q);
        q += 8;
      }
    }
  }
  return out;
}

CMatrix read_csv_matrix(const std::string& path) {
  const std::string content = read_file_bytes(path);
  std::vector<std::vector<Complex>> rows;
  std::size_t line_start = 0;
  while (line_start <= content.size()) {
    if (line_start == content.size()) break;
    std::size_t line_end = content.find('\n', line_start);
    if (line_end == std::string::npos) line_end = content.size();
    std::string line = content.substr(line_start, line_end - line_start);
    line_start = line_end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && line_start > content.size()) break;  // trailing newline

    const auto row_index = static_cast<Index>(rows.size());
    std::vector<Complex> row;
    std::size_t cell_start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', cell_start);
      const std::string cell = line.substr(
          cell_start, comma == std::string::npos ? std::string::npos
                                                 : comma - cell_start);
      row.push_back(parse_cell(cell, row_index, static_cast<Index>(row.size())));
      if (comma == std::string::npos) break;
      cell_start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("csv: ragged rows at row " + std::to_string(rows.size() + 1) +
                      " (" + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) return CMatrix(0, 0);
  CMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

MatrixFile read_any_matrix(const std::string& path) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw DataError("cannot open file: " + path);
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    if (probe.gcount() == 4 && (std::memcmp(magic, "CMX1", 4) == 0 ||
                                std::memcmp(magic, "RMX1", 4) == 0)) {
      return read_matrix(path);
    }
  }
  MatrixFile out;
  out.is_complex = true;
  out.cdata = read_csv_matrix(path);
  return out;
}

void write_model(const std::string& path, const DmdModel& model,
                 const FitReport& report) {
  validate_model(model);
  if (!std::isfinite(report.final_objective) ||
      !std::isfinite(report.avg_inner_iterations)) {
    throw DataError("write_model: report numbers must be finite");
  }
  const Index n = model.phi_b.rows();
  const Index r = model.rank;

  // Exact split: b holds a power-of-two scale per column, phi the quotients.
  RVector b(r);
  CMatrix phi(n, r);
  for (Index j = 0; j < r; ++j) {
    b(j) = column_scale(model.phi_b, j);
    if (b(j) == 0.0) {
      phi.col(j).setZero();
      continue;
    }
    for (Index i = 0; i < n; ++i) {
      phi(i, j) = Complex(model.phi_b(i, j).real() / b(j),
                          model.phi_b(i, j).imag() / b(j));
    }
  }

  std::vector<bool> mask = report.global_mask;
  if (static_cast<Index>(mask.size()) != r) {
    mask.assign(static_cast<std::size_t>(r), false);
  }

  std::string doc;
  doc += "{\n";
  doc += "  \"format_version\": \"1\",\n";
  doc += "  \"rank\": " + std::to_string(r) + ",\n";
  doc += "  \"omega\": [";
  for (Index j = 0; j < r; ++j) {
    doc += (j ? ", [" : "[") + fmt17(model.omega(j).real()) + ", " +
           fmt17(model.omega(j).imag()) + "]";
  }
  doc += "],\n";
  doc += "  \"b\": [";
  for (Index j = 0; j < r; ++j) doc += (j ? ", " : "") + fmt17(b(j));
  doc += "],\n";
  doc += "  \"phi\": [\n";
  for (Index i = 0; i < n; ++i) {
    doc += "    [";
    for (Index j = 0; j < r; ++j) {
      doc += (j ? ", [" : "[") + fmt17(phi(i, j).real()) + ", " +
             fmt17(phi(i, j).imag()) + "]";
    }
    doc += i + 1 < n ? "],\n" : "]\n";
  }
  doc += "  ],\n";
  doc += "  \"global_mask\": [";
  for (Index j = 0; j < r; ++j) {
    doc += (j ? ", " : "");
    doc += mask[static_cast<std::size_t>(j)] ? "true" : "false";
  }
  doc += "],\n";
  doc += "  \"report\": {\n";
  doc += "    \"outer_iterations\": " + std::to_string(report.outer_iterations) + ",\n";
  doc += "    \"avg_inner_iterations\": " + fmt17(report.avg_inner_iterations) + ",\n";
  doc += "    \"final_objective\": " + fmt17(report.final_objective) + ",\n";
  doc += std::string("    \"converged\": ") + (report.converged ? "true" : "false") +
         "\n";
  doc += "  }\n";
  doc += "}\n";
  write_file_bytes(path, doc);
}

std::pair<DmdModel, FitReport> read_model(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file_bytes(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model document is not valid JSON: " + std::string(e.what()));
  }
  try {
    if (!doc.is_object()) throw DataError("model document: top level must be an object");
    const auto version = doc.at("format_version").get<std::string>();
    if (version != "1") {
      throw DataError("model document: unsupported format_version '" + version + "'");
    }
    const auto rank = doc.at("rank").get<Index>();
    if (rank < 1 || rank > (Index{1} << 24)) {
      throw DataError("model document: rank out of range");
    }
    const auto& omega_node = doc.at("omega");
    const auto& b_node = doc.at("b");
    const auto& phi_node = doc.at("phi");
    const auto& mask_node = doc.at("global_mask");
    if (!omega_node.is_array() || static_cast<Index>(omega_node.size()) != rank ||
        !b_node.is_array() || static_cast<Index>(b_node.size()) != rank ||
        !phi_node.is_array() || !mask_node.is_array() ||
        static_cast<Index>(mask_node.size()) != rank) {
      throw DataError("model document: field sizes disagree with rank");
    }

    DmdModel model;
    model.rank = rank;
    model.omega.resize(rank);
    for (Index j = 0; j < rank; ++j) model.omega(j) = json_pair(omega_node[j]);
    RVector b(rank);
    for (Index j = 0; j < rank; ++j) b(j) = b_node[j].get<double>();

    const auto n = static_cast<Index>(phi_node.size());
    model.phi_b.resize(n, rank);
    for (Index i = 0; i < n; ++i) {
      const auto& row = phi_node[i];
      if (!row.is_array() || static_cast<Index>(row.size()) != rank) {
        throw DataError("model document: phi row " + std::to_string(i) +
                        " has the wrong length");
      }
      for (Index j = 0; j < rank; ++j) {
        const Complex q = json_pair(row[j]);
        model.phi_b(i, j) = Complex(q.real() * b(j), q.imag() * b(j));
      }
    }

    FitReport report;
    report.global_mask.resize(static_cast<std::size_t>(rank));
    for (Index j = 0; j < rank; ++j) {
      report.global_mask[static_cast<std::size_t>(j)] = mask_node[j].get<bool>();
    }
    const auto& rep = doc.at("report");
    report.outer_iterations = rep.at("outer_iterations").get<int>();
    report.avg_inner_iterations = rep.at("avg_inner_iterations").get<double>();
    report.final_objective = rep.at("final_objective").get<double>();
    report.converged = rep.at("converged").get<bool>();

    validate_model(model);
    return {std::move(model), std::move(report)};
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model document is malformed: " + std::string(e.what()));
  }
}

void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw DataError("sweep table: no rows to write");
  std::string csv = "lambda,rel_error,nonzero_fraction,n_global\n";
  for (const SweepRow& row : rows) {
    csv += fmt17(row.lambda) + "," + fmt17(row.rel_error) + "," +
           fmt17(row.nonzero_fraction) + "," + std::to_string(row.n_global) + "\n";
  }
  write_file_bytes(path, csv);
}

}  // namespace sparsemode
