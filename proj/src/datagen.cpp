#include "sparsemode/datagen.hpp"

#include <cmath>
#include <numbers>

#include "sparsemode/errors.hpp"
#include "sparsemode/linalg.hpp"
#include "sparsemode/parallel.hpp"

namespace sparsemode {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform on the open interval (0, 1); safe as a log argument.
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double trapezoid(const RVector& grid, const RVector& values) {
  double total = 0.0;
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    total += 0.5 * (values(i) + values(i + 1)) * (grid(i + 1) - grid(i));
  }
  return total;
}

void check_grid(const RVector& grid, bool must_span, double a) {
  if (grid.size() < 2) throw DataError("grid needs at least two points");
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid(i) < grid(i + 1))) throw DataError("grid must be strictly increasing");
  }
  if (must_span && (grid(0) > -a || grid(grid.size() - 1) < a)) {
    throw DataError("grid must span [-a, a]");
  }
}

// Even levels solve xi tan xi = eta, odd levels xi cot xi = -eta, with
// eta = sqrt(R^2 - xi^2). Brackets are shrunk by kEdge at the trig poles.
constexpr double kEdge = 1e-12;

double even_gap(double xi, double r_circ) {
  return xi * std::tan(xi) - std::sqrt(std::max(r_circ * r_circ - xi * xi, 0.0));
}

double odd_gap(double xi, double r_circ) {
  return xi * (std::cos(xi) / std::sin(xi)) +
         std::sqrt(std::max(r_circ * r_circ - xi * xi, 0.0));
}

}  // namespace

std::vector<BoundState> solve_bound_states(double V0, double a, double tol) {
  if (!(V0 > 0) || !std::isfinite(V0) || !(a > 0) || !std::isfinite(a)) {
    throw DataError("solve_bound_states: V0 and a must be positive");
  }
  if (!(tol > 0) || !std::isfinite(tol)) {
    throw DataError("solve_bound_states: tol must be positive");
  }
  const double r_circ = a * std::sqrt(2.0 * V0);

  // The even gap runs negative-to-positive over its bracket, the odd gap the
  // other way; track whichever sign the left end carries.
  auto bisect = [&](double lo, double hi, auto&& gap) {
    double g_lo = gap(lo, r_circ);
    const double g_hi = gap(hi, r_circ);
    if (!(g_lo * g_hi < 0.0)) return -1.0;  // bracket misses the circle
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double g_mid = gap(mid, r_circ);
      if ((g_mid < 0.0) == (g_lo < 0.0)) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::vector<BoundState> states;
  auto try_level = [&](double lo, double hi, Parity parity, auto&& gap) {
    if (!(lo < hi)) return;
    const double xi = bisect(lo, hi, gap);
    if (xi <= 0.0) return;
    const double eta = std::sqrt(std::max(r_circ * r_circ - xi * xi, 0.0));
    states.push_back(
        {xi * xi / (2.0 * a * a) - V0, parity, xi, eta, xi / a, eta / a});
  };
  for (int k = 0; k * kPi < r_circ; ++k) {
    try_level(k * kPi + kEdge, std::min(k * kPi + kPi / 2 - kEdge, r_circ),
              Parity::even, even_gap);
    try_level(k * kPi + kPi / 2 + kEdge, std::min((k + 1) * kPi - kEdge, r_circ),
              Parity::odd, odd_gap);
  }
  std::sort(states.begin(), states.end(),
            [](const BoundState& s, const BoundState& t) { return s.energy < t.energy; });
  return states;
}

RVector bound_state_eigenfunction(const BoundState& state, double a,
                                  const RVector& grid) {
  if (!(a > 0) || !std::isfinite(a)) {
    throw DataError("bound_state_eigenfunction: a must be positive");
  }
  check_grid(grid, /*must_span=*/true, a);
  const bool even = state.parity == Parity::even;
  RVector v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    if (std::abs(x) < a) {
      v(i) = even ? std::cos(state.alpha * x) : std::sin(state.alpha * x);
    } else {
      const double decay = std::exp(-state.beta * (std::abs(x) - a));
      const double sign = x < 0.0 ? -1.0 : 1.0;
      v(i) = even ? std::cos(state.xi) * decay : sign * std::sin(state.xi) * decay;
    }
  }
  const double mass = trapezoid(grid, v.cwiseAbs2());
  if (!(mass > 0)) throw NumericalError("bound_state_eigenfunction: zero mass on grid");
  v /= std::sqrt(mass);
  const double inside = even ? std::cos(state.xi) : std::sin(state.xi);
  if (inside < 0.0) v = -v;
  return v;
}

CVector scattering_state(double energy, double V0, double a, const RVector& grid) {
  if (!(energy > 0) || !std::isfinite(energy)) {
    throw DataError("scattering_state: energy must be positive");
  }
  if (!(V0 > 0) || !(a > 0)) throw DataError("scattering_state: V0 and a must be positive");
  check_grid(grid, /*must_span=*/false, a);

  const double alpha = std::sqrt(2.0 * (V0 + energy));
  const Complex beta(0.0, std::sqrt(2.0 * energy));
  const double s2 = std::sin(2.0 * alpha * a);
  const double c2 = std::cos(2.0 * alpha * a);
  const Complex coef_a =
      (c2 + ((alpha * alpha - beta * beta) / (2.0 * alpha * beta)) * s2) *
      std::exp(2.0 * beta * a);
  const Complex coef_b = -((alpha * alpha + beta * beta) / (2.0 * alpha * beta)) * s2;
  const Complex coef_c =
      (std::sin(alpha * a) + (beta / alpha) * std::cos(alpha * a)) * std::exp(beta * a);
  const Complex coef_d =
      (std::cos(alpha * a) - (beta / alpha) * std::sin(alpha * a)) * std::exp(beta * a);

  CVector v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    if (x > a) {
      v(i) = std::exp(beta * x);
    } else if (x >= -a) {
      v(i) = coef_c * std::sin(alpha * x) + coef_d * std::cos(alpha * x);
    } else {
      v(i) = coef_a * std::exp(beta * x) + coef_b * std::exp(-beta * x);
    }
  }
  RVector abs2(grid.size());
  for (Index i = 0; i < grid.size(); ++i) abs2(i) = std::norm(v(i));
  const double mass = trapezoid(grid, abs2);
  if (!(mass > 0)) throw NumericalError("scattering_state: zero mass on grid");
  v /= std::sqrt(mass);
  return v;
}

RVector well_grid(const WellSpec& well) {
  if (!(well.dx > 0) || !std::isfinite(well.dx)) {
    throw DataError("well grid: dx must be positive");
  }
  if (!(well.x_min < -well.a) || !(well.a < well.x_max)) {
    throw DataError("well grid: domain must contain [-a, a]");
  }
  const auto count = static_cast<Index>(std::llround((well.x_max - well.x_min) / well.dx));
  if (count < 2) throw DataError("well grid: needs at least two points");
  RVector grid(count);
  for (Index i = 0; i < count; ++i) grid(i) = well.x_min + static_cast<double>(i) * well.dx;
  return grid;
}

RVector well_times(const WellSpec& well) {
  if (well.t_count < 2) throw DataError("well times: needs at least two snapshots");
  if (!(well.dt_snapshot > 0) || !std::isfinite(well.dt_snapshot)) {
    throw DataError("well times: dt_snapshot must be positive");
  }
  RVector times(well.t_count);
  for (Index k = 0; k < well.t_count; ++k) {
    times(k) = static_cast<double>(k) * well.dt_snapshot;
  }
  return times;
}

SpectrumSample default_spectrum_sample(std::size_t n_bound) {
  SpectrumSample sample;
  sample.bound_amplitudes = RVector::Constant(static_cast<Index>(n_bound), 0.5);
  const Index n_scatter = 500;
  sample.scattering_energies.resize(n_scatter);
  sample.scattering_amplitudes.resize(n_scatter);
  for (Index s = 0; s < n_scatter; ++s) {
    const double lambda = 0.1 * static_cast<double>(s + 1);
    sample.scattering_energies(s) = lambda;
    sample.scattering_amplitudes(s) = 0.2 / lambda;
  }
  return sample;
}

WellData gen_square_well_dataset(const WellSpec& well, const SpectrumSample& sample,
                                 double noise_sigma, std::uint64_t seed) {
  if (!(well.V0 > 0) || !std::isfinite(well.V0) || !(well.a > 0) ||
      !std::isfinite(well.a)) {
    throw DataError("well dataset: V0 and a must be positive");
  }
  const RVector grid = well_grid(well);
  const RVector times = well_times(well);

  const std::vector<BoundState> states = solve_bound_states(well.V0, well.a, 1e-13);
  const auto n_bound = static_cast<Index>(states.size());
  if (sample.bound_amplitudes.size() != n_bound) {
    throw DataError("well dataset: bound amplitude count does not match bound states");
  }
  const Index n_scatter = sample.scattering_energies.size();
  if (sample.scattering_amplitudes.size() != n_scatter) {
    throw DataError("well dataset: scattering energies and amplitudes differ in length");
  }
  if (!sample.bound_amplitudes.allFinite() || !sample.scattering_amplitudes.allFinite()) {
    throw DataError("well dataset: amplitudes must be finite");
  }
  for (Index s = 0; s < n_scatter; ++s) {
    if (!(sample.scattering_energies(s) > 0)) {
      throw DataError("well dataset: scattering energies must be positive");
    }
  }

  const Index n = grid.size();
  const Index cols = n_bound + n_scatter;
  CMatrix modes(n, cols);
  CVector omega(cols);
  RVector energies(cols);
  for (Index j = 0; j < n_bound; ++j) {
    const RVector v = bound_state_eigenfunction(states[static_cast<std::size_t>(j)],
                                                well.a, grid);
    modes.col(j) = (sample.bound_amplitudes(j) * v).cast<Complex>();
    energies(j) = states[static_cast<std::size_t>(j)].energy;
  }
  parallel_for(static_cast<std::size_t>(n_scatter), [&](std::size_t si) {
    const auto s = static_cast<Index>(si);
    const double lambda = sample.scattering_energies(s);
    modes.col(n_bound + s) =
        sample.scattering_amplitudes(s) * scattering_state(lambda, well.V0, well.a, grid);
    energies(n_bound + s) = lambda;
  });
  for (Index j = 0; j < cols; ++j) omega(j) = Complex(0.0, -energies(j));

  WellData out;
  out.clean.data = modes * build_time_matrix(omega, times);
  out.clean.times = times;
  out.noisy.data = add_noise(out.clean.data, noise_sigma, seed);
  out.noisy.times = times;
  out.truth.reserve(static_cast<std::size_t>(cols));
  for (Index j = 0; j < cols; ++j) out.truth.push_back({energies(j), modes.col(j)});
  return out;
}

VideoData gen_synthetic_video(const VideoSpec& spec) {
  if (spec.height < 48 || spec.width < 48) {
    throw DataError("video: frame must be at least 48 x 48 to hold the square patch");
  }
  if (spec.n_frames < 2) throw DataError("video: needs at least two frames");
  if (!(spec.dt > 0) || !std::isfinite(spec.dt)) {
    throw DataError("video: dt must be positive");
  }

  const Index h = spec.height;
  const Index w = spec.width;
  const Index n = h * w;
  RVector gradient(n), gauss(n), square(n);
  const double row_center = static_cast<double>(h - 1) / 2.0;
  const double col_center = static_cast<double>(w - 1) / 2.0;
  const double gauss_var = 2.0 * 8.0 * 8.0;
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < w; ++c) {
      const Index i = r * w + c;
      gradient(i) = static_cast<double>(r + c) / static_cast<double>((h - 1) + (w - 1));
      const double dr = static_cast<double>(r) - row_center;
      const double dc = static_cast<double>(c) - col_center;
      gauss(i) = std::exp(-(dr * dr + dc * dc) / gauss_var);
      square(i) = (r >= 40 && r < 48 && c >= 40 && c < 48) ? 1.0 : 0.0;
    }
  }
  gradient /= gradient.maxCoeff();
  gauss /= gauss.maxCoeff();

  CMatrix phi(n, 3);
  phi.col(0) = gradient.cast<Complex>();
  phi.col(1) = gauss.cast<Complex>();
  phi.col(2) = square.cast<Complex>();
  CVector omega(3);
  omega << Complex(0.0, kPi), Complex(0.0, 2.0 * kPi), Complex(0.0, 3.0 * kPi);

  RVector times(spec.n_frames);
  for (Index k = 0; k < spec.n_frames; ++k) {
    times(k) = static_cast<double>(k) * spec.dt;
  }

  VideoData out;
  out.clean.data = phi * build_time_matrix(omega, times);
  out.clean.times = times;
  out.noisy.data = add_noise(out.clean.data, spec.noise_sigma, spec.seed);
  out.noisy.times = times;
  out.truth = DmdModel{std::move(omega), std::move(phi), 3};
  return out;
}

CMatrix add_noise(const CMatrix& x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0) || !std::isfinite(sigma)) {
    throw DataError("add_noise: sigma must be finite and nonnegative");
  }
  if (sigma == 0.0) return x;
  CMatrix out(x.rows(), x.cols());
  const auto cols = static_cast<std::uint64_t>(x.cols());
  parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)) ^
                            (0xC2B2AE3D27D4EB4FULL * (j + 1));
      const double u1 = to_unit(splitmix_next(state));
      const double u2 = to_unit(splitmix_next(state));
      const double radius = sigma * std::sqrt(-2.0 * std::log(u1));
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          x(static_cast<Index>(i), static_cast<Index>(j)) +
          Complex(radius * std::cos(2.0 * kPi * u2), radius * std::sin(2.0 * kPi * u2));
    }
  });
  return out;
}

}  // namespace sparsemode
