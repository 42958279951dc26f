#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "sparsemode/core.hpp"
#include "sparsemode/datagen.hpp"
#include "sparsemode/errors.hpp"

using namespace sparsemode;

namespace {

double trapezoid_abs_sq(const RVector& grid, const RVector& v) {
  double total = 0.0;
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    total += 0.5 * (grid(i + 1) - grid(i)) * (v(i) * v(i) + v(i + 1) * v(i + 1));
  }
  return total;
}

// frozen sign-scan oracle values for V0 = 1, a = 5
const double kWellEnergies[5] = {
    -0.9621829255312488, -0.8494980752043821, -0.6646558498705105,
    -0.4142822200286694, -0.1193073030857645};

}  // namespace

TEST_CASE("solve_bound_states finds the five states of the reference well") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  REQUIRE(states.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(states[j].energy == doctest::Approx(kWellEnergies[j]).epsilon(1e-10));
    CHECK(states[j].parity == (j % 2 == 0 ? Parity::even : Parity::odd));
  }
  // energies ascend
  for (std::size_t j = 1; j < 5; ++j) CHECK(states[j].energy > states[j - 1].energy);
}

TEST_CASE("solve_bound_states satisfies the matching conditions on the circle") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  const double r_sq = 2.0 * 1.0 * 5.0 * 5.0;
  for (const auto& s : states) {
    CHECK(std::abs(s.xi * s.xi + s.eta_well * s.eta_well - r_sq) < 1e-10);
    if (s.parity == Parity::even) {
      CHECK(std::abs(s.xi * std::tan(s.xi) - s.eta_well) < 1e-10);
    } else {
      CHECK(std::abs(s.xi / std::tan(s.xi) + s.eta_well) < 1e-10);
    }
    CHECK(s.energy > -1.0);
    CHECK(s.energy < 0.0);
    CHECK(s.alpha == doctest::Approx(s.xi / 5.0));
    CHECK(s.beta == doctest::Approx(s.eta_well / 5.0));
    CHECK(s.energy ==
          doctest::Approx(s.xi * s.xi / (2.0 * 25.0) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("a shallow well holds exactly one even state") {
  auto states = solve_bound_states(0.02, 5.0, 1e-13);
  REQUIRE(states.size() == 1);
  CHECK(states[0].parity == Parity::even);
  CHECK(states[0].energy == doctest::Approx(-9.075063317207933e-03).epsilon(1e-8));
}

TEST_CASE("bound-state count matches the circle-arc formula") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> v0_dist(0.05, 4.0);
  std::uniform_real_distribution<double> a_dist(0.5, 8.0);
  for (int trial = 0; trial < 50; ++trial) {
    double v0 = v0_dist(gen);
    double a = a_dist(gen);
    double r = a * std::sqrt(2.0 * v0);
    auto states = solve_bound_states(v0, a, 1e-11);
    CHECK(static_cast<double>(states.size()) ==
          doctest::Approx(std::ceil(2.0 * r / std::numbers::pi)));
    for (std::size_t j = 1; j < states.size(); ++j) {
      CHECK(states[j].energy > states[j - 1].energy);
      CHECK(states[j].parity != states[j - 1].parity);
    }
  }
}

TEST_CASE("bound eigenfunctions are normalized, continuous and symmetric") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  RVector grid = well_grid(WellSpec{});
  for (const auto& s : states) {
    RVector v = bound_state_eigenfunction(s, 5.0, grid);
    CHECK(std::abs(trapezoid_abs_sq(grid, v) - 1.0) < 1e-6);
    // mirrored grid points: x_i = -25 + 0.1 i pairs with index (500 - i) for x = -x_i
    for (Index i = 1; i < grid.size(); ++i) {
      Index mirror = 500 - i;
      if (mirror < 0 || mirror >= grid.size()) continue;
      double expect = s.parity == Parity::even ? v(mirror) : -v(mirror);
      CHECK(std::abs(v(i) - expect) < 1e-10);
    }
  }
}

TEST_CASE("bound eigenfunction sign is positive just inside the right edge") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  RVector grid = well_grid(WellSpec{});
  for (const auto& s : states) {
    RVector v = bound_state_eigenfunction(s, 5.0, grid);
    // closest grid point below a = 5 is x = 4.9
    Index idx = 0;
    double best = 1e300;
    for (Index i = 0; i < grid.size(); ++i) {
      if (grid(i) <= 5.0 && 5.0 - grid(i) < best) {
        best = 5.0 - grid(i);
        idx = i;
      }
    }
    CHECK(v(idx) > 0.0);
  }
}

TEST_CASE("bound eigenfunction rejects a grid that misses the well") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  RVector short_grid(3);
  short_grid << -1.0, 0.0, 1.0;  // does not span [-5, 5]
  CHECK_THROWS_AS(bound_state_eigenfunction(states[0], 5.0, short_grid), DataError);
}

TEST_CASE("distinct bound states are numerically orthogonal") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  RVector grid = well_grid(WellSpec{});
  std::vector<RVector> vs;
  for (const auto& s : states) vs.push_back(bound_state_eigenfunction(s, 5.0, grid));
  for (std::size_t p = 0; p < vs.size(); ++p) {
    for (std::size_t q = p + 1; q < vs.size(); ++q) {
      double inner = 0.0;
      for (Index i = 0; i + 1 < grid.size(); ++i) {
        inner += 0.5 * (grid(i + 1) - grid(i)) *
                 (vs[p](i) * vs[q](i) + vs[p](i + 1) * vs[q](i + 1));
      }
      CHECK(std::abs(inner) < 1e-4);
    }
  }
}

TEST_CASE("bound eigenfunctions satisfy the discrete eigenproblem away from the edges") {
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  for (double dx : {0.1, 0.05}) {
    WellSpec spec;
    spec.dx = dx;
    RVector grid = well_grid(spec);
    for (const auto& s : states) {
      RVector v = bound_state_eigenfunction(s, 5.0, grid);
      double resid_sq = 0.0;
      double norm_sq = 0.0;
      for (Index i = 1; i + 1 < grid.size(); ++i) {
        double x = grid(i);
        if (std::abs(std::abs(x) - 5.0) <= dx + 1e-12) continue;  // potential jump
        double lap = (v(i + 1) - 2.0 * v(i) + v(i - 1)) / (dx * dx);
        double pot = std::abs(x) < 5.0 ? -1.0 : 0.0;
        double r = -0.5 * lap + pot * v(i) - s.energy * v(i);
        resid_sq += r * r;
        norm_sq += v(i) * v(i);
      }
      double ratio = std::sqrt(resid_sq / norm_sq);
      if (dx == 0.1) {
        CHECK(ratio < 1e-2);
      } else {
        // halving dx should shrink the residual by about four
        CHECK(ratio < 1e-2 / 3.0);
      }
    }
  }
}

TEST_CASE("scattering states transmit cleanly on the right of the well") {
  RVector grid = well_grid(WellSpec{});
  for (double energy : {0.5, 3.0, 20.0}) {
    CVector v = scattering_state(energy, 1.0, 5.0, grid);
    double ref = -1.0;
    for (Index i = 0; i < grid.size(); ++i) {
      if (grid(i) <= 5.0) continue;
      double mag = std::abs(v(i));
      if (ref < 0.0) ref = mag;
      CHECK(mag == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("scattering states lose their reflected wave at high energy") {
  RVector grid = well_grid(WellSpec{});
  CVector v = scattering_state(100.0, 1.0, 5.0, grid);
  double lo = 1e300, hi = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    if (grid(i) >= -5.0) continue;
    double mag = std::abs(v(i));
    lo = std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  CHECK(hi < 1.05 * lo);
}

TEST_CASE("scattering_state rejects nonpositive energy") {
  RVector grid = well_grid(WellSpec{});
  CHECK_THROWS_AS(scattering_state(0.0, 1.0, 5.0, grid), DataError);
  CHECK_THROWS_AS(scattering_state(-0.5, 1.0, 5.0, grid), DataError);
}

TEST_CASE("well_grid and well_times follow the spec defaults") {
  WellSpec spec;
  RVector grid = well_grid(spec);
  REQUIRE(grid.size() == 500);
  CHECK(grid(0) == doctest::Approx(-25.0));
  CHECK(grid(499) == doctest::Approx(24.9));
  for (Index i = 1; i < 500; ++i) CHECK(grid(i) - grid(i - 1) == doctest::Approx(0.1));
  RVector times = well_times(spec);
  REQUIRE(times.size() == 200);
  CHECK(times(0) == 0.0);
  CHECK(times(199) == doctest::Approx(199.0));
}

TEST_CASE("default spectrum sample matches the documented weights") {
  auto sample = default_spectrum_sample(5);
  REQUIRE(sample.bound_amplitudes.size() == 5);
  for (Index j = 0; j < 5; ++j) CHECK(sample.bound_amplitudes(j) == 0.5);
  REQUIRE(sample.scattering_energies.size() == 500);
  REQUIRE(sample.scattering_amplitudes.size() == 500);
  CHECK(sample.scattering_energies(0) == doctest::Approx(0.1));
  CHECK(sample.scattering_energies(499) == doctest::Approx(50.0));
  for (Index s = 0; s < 500; ++s) {
    CHECK(sample.scattering_amplitudes(s) ==
          doctest::Approx(0.2 / sample.scattering_energies(s)));
  }
}

TEST_CASE("square-well dataset has the documented shape and truth") {
  WellSpec spec;
  auto sample = default_spectrum_sample(5);
  WellData data = gen_square_well_dataset(spec, sample, 0.15, 7);
  CHECK(data.clean.n() == 500);
  CHECK(data.clean.m() == 200);
  CHECK(data.noisy.n() == 500);
  CHECK(data.truth.size() == 505);
  // truth components rebuild the clean matrix
  CMatrix rebuilt = CMatrix::Zero(500, 200);
  RVector times = well_times(spec);
  for (const auto& comp : data.truth) {
    for (Index k = 0; k < 200; ++k) {
      rebuilt.col(k) += comp.mode * std::exp(Complex(0.0, -comp.energy * times(k)));
    }
  }
  CHECK(relative_error(rebuilt, data.clean.data) < 1e-10);
}

TEST_CASE("a single unit-amplitude bound state reproduces its eigenfunction at t=0") {
  WellSpec spec;
  spec.t_count = 3;
  SpectrumSample sample;
  sample.bound_amplitudes = RVector::Zero(5);
  sample.bound_amplitudes(0) = 1.0;
  WellData data = gen_square_well_dataset(spec, sample, 0.0, 0);
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  RVector v = bound_state_eigenfunction(states[0], 5.0, well_grid(spec));
  for (Index i = 0; i < 500; ++i) {
    CHECK(std::abs(data.clean.data(i, 0) - Complex(v(i), 0.0)) < 1e-12);
  }
}

TEST_CASE("well snapshots obey the triangle-inequality amplitude bound") {
  WellSpec spec;
  spec.t_count = 40;
  auto sample = default_spectrum_sample(5);
  WellData data = gen_square_well_dataset(spec, sample, 0.0, 0);
  RVector grid = well_grid(spec);
  auto states = solve_bound_states(1.0, 5.0, 1e-13);
  RVector bound_total = RVector::Zero(500);
  for (std::size_t j = 0; j < states.size(); ++j) {
    RVector v = bound_state_eigenfunction(states[j], 5.0, grid);
    bound_total += sample.bound_amplitudes(static_cast<Index>(j)) * v.cwiseAbs();
  }
  RVector scatter_total = RVector::Zero(500);
  for (Index s = 0; s < sample.scattering_energies.size(); ++s) {
    CVector v = scattering_state(sample.scattering_energies(s), 1.0, 5.0, grid);
    scatter_total += sample.scattering_amplitudes(s) * v.cwiseAbs();
  }
  RVector cap = bound_total + scatter_total;
  for (Index i = 0; i < 500; i += 25) {
    for (Index k = 0; k < 40; ++k) {
      CHECK(std::abs(data.clean.data(i, k)) <= cap(i) + 1e-9);
    }
  }
}

TEST_CASE("square-well dataset rejects inconsistent samples") {
  WellSpec spec;
  SpectrumSample sample;
  sample.bound_amplitudes = RVector::Constant(2, 0.5);  // well has 5 bound states
  CHECK_THROWS_AS(gen_square_well_dataset(spec, sample, 0.0, 0), DataError);

  sample = default_spectrum_sample(5);
  sample.scattering_energies.conservativeResize(499);
  CHECK_THROWS_AS(gen_square_well_dataset(spec, sample, 0.0, 0), DataError);

  sample = default_spectrum_sample(5);
  sample.scattering_energies(3) = -1.0;
  CHECK_THROWS_AS(gen_square_well_dataset(spec, sample, 0.0, 0), DataError);
}

TEST_CASE("synthetic video has the documented shape and frequencies") {
  VideoSpec spec;
  spec.n_frames = 40;  // keep the unit test light
  VideoData video = gen_synthetic_video(spec);
  CHECK(video.clean.n() == 2500);
  CHECK(video.clean.m() == 40);
  REQUIRE(video.truth.rank == 3);
  CHECK(std::abs(video.truth.omega(0) - Complex(0.0, std::numbers::pi)) < 1e-14);
  CHECK(std::abs(video.truth.omega(1) - Complex(0.0, 2.0 * std::numbers::pi)) < 1e-14);
  CHECK(std::abs(video.truth.omega(2) - Complex(0.0, 3.0 * std::numbers::pi)) < 1e-14);
}

TEST_CASE("synthetic video truth model reconstructs the clean data") {
  VideoSpec spec;
  spec.n_frames = 60;
  VideoData video = gen_synthetic_video(spec);
  CMatrix rebuilt = reconstruct(video.truth, video.clean.times);
  CHECK(relative_error(rebuilt, video.clean.data) < 1e-12);
}

TEST_CASE("synthetic video frame zero is the plain mode sum") {
  VideoSpec spec;
  spec.n_frames = 8;
  VideoData video = gen_synthetic_video(spec);
  CVector sum = video.truth.phi_b.rowwise().sum();
  CHECK((video.clean.data.col(0) - sum).norm() < 1e-12 * sum.norm());
}

TEST_CASE("synthetic video modes look like their shapes") {
  VideoSpec spec;
  spec.n_frames = 4;
  VideoData video = gen_synthetic_video(spec);
  const auto& phi = video.truth.phi_b;
  // gradient: zero at (0,0), one at (49,49), monotone along the diagonal
  CHECK(std::abs(phi(0, 0)) < 1e-14);
  CHECK(std::abs(phi(49 * 50 + 49, 0) - Complex(1, 0)) < 1e-14);
  // Gaussian: peaks at the frame center
  Index center = (50 / 2) * 50 + 50 / 2;
  for (Index i = 0; i < 2500; ++i) {
    CHECK(std::abs(phi(i, 1)) <= std::abs(phi(center, 1)) + 1e-12);
  }
  // square: exactly 64 unit pixels inside rows/cols [40, 48)
  Index on = 0;
  for (Index r = 0; r < 50; ++r) {
    for (Index c = 0; c < 50; ++c) {
      Complex v = phi(r * 50 + c, 2);
      bool inside = r >= 40 && r < 48 && c >= 40 && c < 48;
      if (inside) {
        CHECK(std::abs(v - Complex(1, 0)) < 1e-14);
        ++on;
      } else {
        CHECK(std::abs(v) < 1e-14);
      }
    }
  }
  CHECK(on == 64);
}

TEST_CASE("synthetic video with zero noise copies the clean set") {
  VideoSpec spec;
  spec.n_frames = 10;
  spec.noise_sigma = 0.0;
  VideoData video = gen_synthetic_video(spec);
  CHECK(video.clean.data == video.noisy.data);
}

TEST_CASE("synthetic video rejects frames too small for the square mode") {
  VideoSpec spec;
  spec.height = 47;
  CHECK_THROWS_AS(gen_synthetic_video(spec), DataError);
  spec.height = 50;
  spec.width = 40;
  CHECK_THROWS_AS(gen_synthetic_video(spec), DataError);
  spec.width = 50;
  spec.n_frames = 1;
  CHECK_THROWS_AS(gen_synthetic_video(spec), DataError);
}

TEST_CASE("add_noise is deterministic and seed-sensitive") {
  CMatrix x = CMatrix::Random(20, 30);
  CMatrix a = add_noise(x, 0.3, 42);
  CMatrix b = add_noise(x, 0.3, 42);
  CHECK(a == b);
  CMatrix c = add_noise(x, 0.3, 43);
  CHECK(a != c);
  CHECK(add_noise(x, 0.0, 42) == x);
  CHECK_THROWS_AS(add_noise(x, -0.1, 42), DataError);
}

TEST_CASE("add_noise draws have the requested spread") {
  CMatrix x = CMatrix::Zero(1000, 1000);
  CMatrix noisy = add_noise(x, 0.8, 5);
  double mean = 0.0;
  for (Index j = 0; j < 1000; ++j)
    for (Index i = 0; i < 1000; ++i) mean += noisy(i, j).real();
  mean /= 1e6;
  double var = 0.0;
  for (Index j = 0; j < 1000; ++j)
    for (Index i = 0; i < 1000; ++i) {
      double d = noisy(i, j).real() - mean;
      var += d * d;
    }
  var /= 1e6 - 1.0;
  CHECK(std::sqrt(var) == doctest::Approx(0.8).epsilon(0.01));
  CHECK(std::abs(mean) < 0.01);
}
