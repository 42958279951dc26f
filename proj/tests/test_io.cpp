#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "sparsemode/errors.hpp"
#include "sparsemode/io.hpp"

using namespace sparsemode;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sparsemode_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::vector<unsigned char> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CMatrix random_complex(Index rows, Index cols, std::mt19937& gen) {
  std::normal_distribution<double> dist;
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(dist(gen), dist(gen));
  return m;
}

}  // namespace

TEST_CASE("binary matrices round trip bit-exactly") {
  TempDir dir;
  std::mt19937 gen(1);
  std::uniform_int_distribution<Index> size_dist(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    Index rows = size_dist(gen);
    Index cols = size_dist(gen);
    if (trial % 2 == 0) {
      CMatrix m = random_complex(rows, cols, gen);
      write_matrix(dir.file("c.cmx"), m);
      MatrixFile f = read_matrix(dir.file("c.cmx"));
      REQUIRE(f.is_complex);
      CHECK(f.cdata == m);
    } else {
      std::normal_distribution<double> dist;
      RMatrix m(rows, cols);
      for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
      write_matrix(dir.file("r.rmx"), m);
      MatrixFile f = read_matrix(dir.file("r.rmx"));
      REQUIRE(!f.is_complex);
      CHECK(f.rdata == m);
    }
  }
}

TEST_CASE("an empty matrix writes a header-only file") {
  TempDir dir;
  write_matrix(dir.file("empty.cmx"), CMatrix(0, 0));
  CHECK(fs::file_size(dir.file("empty.cmx")) == 20);
  MatrixFile f = read_matrix(dir.file("empty.cmx"));
  CHECK(f.is_complex);
  CHECK(f.cdata.rows() == 0);
  CHECK(f.cdata.cols() == 0);
}

TEST_CASE("the byte layout is little-endian row-major") {
  TempDir dir;
  RMatrix m(1, 2);
  m << 1.0, -2.0;
  write_matrix(dir.file("bytes.rmx"), m);
  auto bytes = read_bytes(dir.file("bytes.rmx"));
  REQUIRE(bytes.size() == 36);
  CHECK(bytes[0] == 'R');
  CHECK(bytes[1] == 'M');
  CHECK(bytes[2] == 'X');
  CHECK(bytes[3] == '1');
  // rows = 1, cols = 2 as little-endian u64
  CHECK(bytes[4] == 1);
  for (int i = 5; i < 12; ++i) CHECK(bytes[i] == 0);
  CHECK(bytes[12] == 2);
  for (int i = 13; i < 20; ++i) CHECK(bytes[i] == 0);
  // 1.0 = 0x3FF0000000000000 little-endian
  CHECK(bytes[26] == 0xF0);
  CHECK(bytes[27] == 0x3F);
  // -2.0 = 0xC000000000000000
  CHECK(bytes[35] == 0xC0);
}

TEST_CASE("read_matrix rejects unknown magic and bad lengths") {
  TempDir dir;
  std::string good(20, '\0');
  good[0] = 'X';
  good[1] = 'X';
  good[2] = 'X';
  good[3] = 'X';
  write_text(dir.file("bad_magic.bin"), good);
  CHECK_THROWS_AS(read_matrix(dir.file("bad_magic.bin")), DataError);

  // valid header claiming a 1x1 complex matrix but truncated payload
  std::string trunc = "CMX1";
  trunc += std::string("\x01\x00\x00\x00\x00\x00\x00\x00", 8);
  trunc += std::string("\x01\x00\x00\x00\x00\x00\x00\x00", 8);
  trunc += std::string(8, '\0');  // only half an entry
  write_text(dir.file("trunc.cmx"), trunc);
  CHECK_THROWS_AS(read_matrix(dir.file("trunc.cmx")), DataError);

  // header shorter than 20 bytes
  write_text(dir.file("short.bin"), "CM");
  CHECK_THROWS_AS(read_matrix(dir.file("short.bin")), DataError);

  // dimensions that would overflow the payload size
  std::string huge = "CMX1";
  huge += std::string("\xff\xff\xff\xff\xff\xff\xff\xff", 8);
  huge += std::string("\xff\xff\xff\xff\xff\xff\xff\xff", 8);
  write_text(dir.file("huge.cmx"), huge);
  CHECK_THROWS_AS(read_matrix(dir.file("huge.cmx")), DataError);

  CHECK_THROWS_AS(read_matrix(dir.file("missing.cmx")), DataError);
}

TEST_CASE("as_real and as_complex convert between payloads") {
  TempDir dir;
  RMatrix real(2, 2);
  real << 1, 2, 3, 4;
  write_matrix(dir.file("r.rmx"), real);
  MatrixFile rf = read_matrix(dir.file("r.rmx"));
  CMatrix widened = rf.as_complex();
  CHECK(widened(1, 0) == Complex(3, 0));
  CHECK(rf.as_real() == real);

  CMatrix complex_no_imag = widened;
  write_matrix(dir.file("c0.cmx"), complex_no_imag);
  CHECK(read_matrix(dir.file("c0.cmx")).as_real() == real);

  CMatrix with_imag = widened;
  with_imag(0, 1) = Complex(2, 0.5);
  write_matrix(dir.file("ci.cmx"), with_imag);
  CHECK_THROWS_AS(read_matrix(dir.file("ci.cmx")).as_real(), DataError);
}

TEST_CASE("csv parses plain reals") {
  TempDir dir;
  write_text(dir.file("m.csv"), "1,2\n3,4");
  CMatrix m = read_csv_matrix(dir.file("m.csv"));
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == Complex(1, 0));
  CHECK(m(0, 1) == Complex(2, 0));
  CHECK(m(1, 0) == Complex(3, 0));
  CHECK(m(1, 1) == Complex(4, 0));
}

TEST_CASE("csv parses complex cells in a+bi form") {
  TempDir dir;
  write_text(dir.file("c.csv"), "1+2i,3-4i\n-1.5e-2-2.25i,7i");
  CMatrix m = read_csv_matrix(dir.file("c.csv"));
  CHECK(m(0, 0) == Complex(1, 2));
  CHECK(m(0, 1) == Complex(3, -4));
  CHECK(m(1, 0) == Complex(-1.5e-2, -2.25));
  CHECK(m(1, 1) == Complex(0, 7));
}

TEST_CASE("csv handles unit imaginary parts and trailing newlines") {
  TempDir dir;
  write_text(dir.file("u.csv"), "2+i,2-i\ni,-i\n");
  CMatrix m = read_csv_matrix(dir.file("u.csv"));
  CHECK(m(0, 0) == Complex(2, 1));
  CHECK(m(0, 1) == Complex(2, -1));
  CHECK(m(1, 0) == Complex(0, 1));
  CHECK(m(1, 1) == Complex(0, -1));
}

TEST_CASE("csv reports ragged rows by 1-indexed position") {
  TempDir dir;
  write_text(dir.file("ragged.csv"), "1,2\n3");
  CHECK_THROWS_WITH_AS(read_csv_matrix(dir.file("ragged.csv")),
                       doctest::Contains("row 2"), DataError);
}

TEST_CASE("csv reports the location of an unparseable cell") {
  TempDir dir;
  write_text(dir.file("bad.csv"), "1,2\n3,zap");
  try {
    read_csv_matrix(dir.file("bad.csv"));
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
}

TEST_CASE("read_any_matrix sniffs binary and falls back to csv") {
  TempDir dir;
  CMatrix m(1, 2);
  m << Complex(1, 1), Complex(0, -3);
  write_matrix(dir.file("bin.cmx"), m);
  CHECK(read_any_matrix(dir.file("bin.cmx")).cdata == m);

  write_text(dir.file("text.csv"), "5,6");
  MatrixFile f = read_any_matrix(dir.file("text.csv"));
  REQUIRE(f.is_complex);
  CHECK(f.cdata(0, 0) == Complex(5, 0));
  CHECK(f.cdata(0, 1) == Complex(6, 0));
}

TEST_CASE("models round trip bit-exactly") {
  TempDir dir;
  std::mt19937 gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<Index> rank_dist(1, 4);
    Index r = rank_dist(gen);
    Index n = r + rank_dist(gen);
    DmdModel model;
    model.rank = r;
    model.omega = random_complex(r, 1, gen).col(0);
    model.phi_b = random_complex(n, r, gen);
    if (trial % 7 == 0) model.phi_b.col(0).setZero();  // zero amplitude column

    FitReport report;
    report.outer_iterations = trial;
    report.avg_inner_iterations = 3.25;
    report.final_objective = 1e-7 * trial;
    report.converged = trial % 2 == 0;
    report.global_mask.assign(static_cast<std::size_t>(r), trial % 3 == 0);

    write_model(dir.file("m.model"), model, report);
    auto [back, back_report] = read_model(dir.file("m.model"));
    REQUIRE(back.rank == r);
    CHECK(back.omega == model.omega);
    CHECK(back.phi_b == model.phi_b);
    CHECK(back_report.outer_iterations == report.outer_iterations);
    CHECK(back_report.avg_inner_iterations == report.avg_inner_iterations);
    CHECK(back_report.final_objective == report.final_objective);
    CHECK(back_report.converged == report.converged);
    CHECK(back_report.global_mask == report.global_mask);
  }
}

TEST_CASE("write_model rejects invalid models") {
  TempDir dir;
  DmdModel model;  // rank 0
  FitReport report;
  CHECK_THROWS_AS(write_model(dir.file("bad.model"), model, report), DataError);

  model.rank = 1;
  model.omega = CVector::Zero(1);
  model.phi_b = CMatrix::Ones(2, 1);
  report.final_objective = std::nan("");
  CHECK_THROWS_AS(write_model(dir.file("bad.model"), model, report), DataError);
}

TEST_CASE("a hand-written model document parses") {
  TempDir dir;
  write_text(dir.file("hand.model"), R"({
  "format_version": "1",
  "rank": 1,
  "omega": [[0.0, 3.141592653589793]],
  "b": [5.0],
  "phi": [[[0.6, 0.0]], [[0.8, 0.0]]],
  "global_mask": [true],
  "report": {
    "outer_iterations": 4,
    "avg_inner_iterations": 2.5,
    "final_objective": 1e-09,
    "converged": true
  }
})");
  auto [model, report] = read_model(dir.file("hand.model"));
  CHECK(model.rank == 1);
  CHECK(std::abs(model.omega(0) - Complex(0.0, 3.141592653589793)) == 0.0);
  CHECK(std::abs(model.phi_b(0, 0) - Complex(3.0, 0.0)) < 1e-15);
  CHECK(std::abs(model.phi_b(1, 0) - Complex(4.0, 0.0)) < 1e-15);
  CHECK(report.outer_iterations == 4);
  CHECK(report.global_mask == std::vector<bool>{true});
}

TEST_CASE("read_model rejects wrong versions and malformed documents") {
  TempDir dir;
  write_text(dir.file("v2.model"), R"({"format_version": "2", "rank": 1})");
  CHECK_THROWS_AS(read_model(dir.file("v2.model")), DataError);

  write_text(dir.file("noise.model"), "this is not json");
  CHECK_THROWS_AS(read_model(dir.file("noise.model")), DataError);

  write_text(dir.file("rank0.model"), R"({
  "format_version": "1", "rank": 0, "omega": [], "b": [], "phi": [],
  "global_mask": [],
  "report": {"outer_iterations": 0, "avg_inner_iterations": 0,
             "final_objective": 0, "converged": false}
})");
  CHECK_THROWS_AS(read_model(dir.file("rank0.model")), DataError);

  // shape disagreement: rank 2 but a single omega entry
  write_text(dir.file("shape.model"), R"({
  "format_version": "1", "rank": 2, "omega": [[0, 1]], "b": [1, 1],
  "phi": [[[1, 0], [0, 1]]],
  "global_mask": [false, false],
  "report": {"outer_iterations": 0, "avg_inner_iterations": 0,
             "final_objective": 0, "converged": false}
})");
  CHECK_THROWS_AS(read_model(dir.file("shape.model")), DataError);
}

TEST_CASE("sweep tables print one row per point in input order") {
  TempDir dir;
  std::vector<SweepRow> rows{{0.1, 0.073, 0.4, 1}};
  write_sweep_table(dir.file("sweep.csv"), rows);
  std::ifstream in(dir.file("sweep.csv"));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "lambda,rel_error,nonzero_fraction,n_global");
  REQUIRE(std::getline(in, line));
  CHECK(line.find("0.1") == 0);
  CHECK(line.find(",1") == line.size() - 2);
  CHECK(!std::getline(in, line));

  // descending lambdas stay in input order
  rows = {{10.0, 0.2, 0.9, 2}, {1.0, 0.1, 0.5, 1}, {5.0, 0.15, 0.7, 0}};
  write_sweep_table(dir.file("sweep3.csv"), rows);
  std::ifstream in3(dir.file("sweep3.csv"));
  std::getline(in3, line);
  std::getline(in3, line);
  CHECK(line.find("10") == 0);
  std::getline(in3, line);
  CHECK(line.find("1,") == 0);
  std::getline(in3, line);
  CHECK(line.find("5,") == 0);
}

TEST_CASE("write_sweep_table rejects empty input") {
  TempDir dir;
  CHECK_THROWS_AS(write_sweep_table(dir.file("none.csv"), {}), DataError);
}
