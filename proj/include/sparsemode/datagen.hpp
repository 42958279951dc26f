#pragma once

#include <cstdint>
#include <vector>

#include "sparsemode/core.hpp"

namespace sparsemode {

// Synthetic oscillating video: three spatial patterns, each blinking at its
// own frequency.
struct VideoSpec {
  Index height = 50;
  Index width = 50;
  Index n_frames = 1000;
  double dt = 0.01;
  double noise_sigma = 0.8;
  std::uint64_t seed = 0;
};

// Finite square well of depth V0 on [-a, a], sampled on a uniform space-time
// grid. The spatial grid is half-open: x_i = x_min + i dx for
// i = 0 .. round((x_max - x_min)/dx) - 1.
struct WellSpec {
  double V0 = 1.0;
  double a = 5.0;
  double x_min = -25.0;
  double x_max = 25.0;
  double dx = 0.1;
  Index t_count = 200;
  double dt_snapshot = 1.0;
};

enum class Parity { even, odd };

// One bound level. xi and eta_well parametrize the transcendental system
// xi tan xi = eta (even) / xi cot xi = -eta (odd), xi^2 + eta^2 = 2 V0 a^2;
// alpha = xi / a and beta = eta_well / a are the interior and exterior wave
// numbers, energy = xi^2 / (2 a^2) - V0.
struct BoundState {
  double energy;
  Parity parity;
  double xi;
  double eta_well;
  double alpha;
  double beta;
};

// Amplitudes for the superposition built by gen_square_well_dataset.
struct SpectrumSample {
  RVector bound_amplitudes;      // one per bound state, energy ascending
  RVector scattering_energies;   // all positive
  RVector scattering_amplitudes; // same length as scattering_energies
};

struct VideoData {
  SnapshotSet clean;
  SnapshotSet noisy;
  DmdModel truth;
};

struct WellMode {
  double energy;
  CVector mode;  // amplitude times normalized spatial profile
};

struct WellData {
  SnapshotSet clean;
  SnapshotSet noisy;
  std::vector<WellMode> truth;
};

// Builds the video dataset: a full-frame linear gradient at frequency pi, a
// centered Gaussian at 2 pi, and a square patch on rows/cols [40, 48) at
// 3 pi, each normalized to unit peak magnitude before superposition. Frames
// must be at least 48 x 48 to hold the patch. truth reconstructs clean
// exactly.
VideoData gen_synthetic_video(const VideoSpec& spec);

// All bound levels of the well, energy ascending (parities alternate starting
// even). Each transcendental root is bisected to an interval narrower than
// tol. The count equals ceil(2 R / pi) with R = a sqrt(2 V0).
std::vector<BoundState> solve_bound_states(double V0, double a, double tol);

// Piecewise eigenfunction on the grid: cos/sin(alpha x) inside the well,
// exponential decay outside, trapezoid-normalized to unit L2 mass over the
// grid, sign fixed so the value just inside x = a is positive. The grid must
// be strictly increasing and span [-a, a].
RVector bound_state_eigenfunction(const BoundState& state, double a,
                                  const RVector& grid);

// Transmitted-only scattering state at positive energy: plane wave e^{beta x}
// for x > a with beta = i sqrt(2 energy), matched through the well by the
// closed-form constants, trapezoid-normalized over the grid.
CVector scattering_state(double energy, double V0, double a, const RVector& grid);

// Superposition u(x, t) = sum_j b_j v_j(x) e^{-i lambda_j t} over the well's
// bound states plus the sampled scattering states. bound_amplitudes must
// match the bound-state count. truth lists every (energy, amplitude * mode)
// component in column order.
WellData gen_square_well_dataset(const WellSpec& well, const SpectrumSample& sample,
                                 double noise_sigma, std::uint64_t seed);

// X plus independent complex Gaussian noise: real and imaginary parts each
// mean 0, std sigma. Entry (i, j) is generated from a counter keyed by
// (seed, i, j), so the result is independent of evaluation order and
// identical across thread counts.
CMatrix add_noise(const CMatrix& x, double sigma, std::uint64_t seed);

// Spatial grid and snapshot times induced by the well spec.
RVector well_grid(const WellSpec& well);
RVector well_times(const WellSpec& well);

// Amplitudes used throughout: b = 0.5 per bound state, scattering energies
// 0.1, 0.2, ..., 50 with amplitudes 0.2 / lambda.
SpectrumSample default_spectrum_sample(std::size_t n_bound);

}  // namespace sparsemode
