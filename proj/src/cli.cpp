#include "sparsemode/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsemode/core.hpp"
#include "sparsemode/datagen.hpp"
#include "sparsemode/errors.hpp"
#include "sparsemode/io.hpp"
#include "sparsemode/solvers.hpp"

namespace sparsemode {

namespace {

PenaltyKind parse_reg(const std::string& text) {
  if (text == "none") return PenaltyKind::none;
  if (text == "l0") return PenaltyKind::l0;
  if (text == "l1") return PenaltyKind::l1;
  if (text == "l0l2") return PenaltyKind::l0_plus_l2sq;
  return PenaltyKind::l1_plus_l2sq;  // "l1l2", enforced by the flag validator
}

Method parse_method(const std::string& text) {
  if (text == "optdmd") return Method::optdmd;
  if (text == "fista") return Method::sparse_fista;
  return Method::sparse_sr3;  // "sr3"
}

bool parse_constraint_text(const std::string& text, ConstraintSet& out) {
  if (text == "none") {
    out = ConstraintSet::unconstrained();
    return true;
  }
  if (text == "imag") {
    out = ConstraintSet::imaginary_axis();
    return true;
  }
  if (text == "lhp") {
    out = ConstraintSet::left_half_plane();
    return true;
  }
  if (text.rfind("disc:", 0) == 0) {
    double parts[3];
    std::size_t start = 5;
    for (int k = 0; k < 3; ++k) {
      const std::size_t colon = text.find(':', start);
      const bool last = k == 2;
      if (last != (colon == std::string::npos)) return false;
      const std::string piece =
          text.substr(start, last ? std::string::npos : colon - start);
      try {
        std::size_t used = 0;
        parts[k] = std::stod(piece, &used);
        if (used != piece.size()) return false;
      } catch (const std::exception&) {
        return false;
      }
      start = colon + 1;
    }
    if (!(parts[2] > 0) || !std::isfinite(parts[2])) return false;
    out = ConstraintSet::disc(Complex(parts[0], parts[1]), parts[2]);
    return true;
  }
  return false;
}

std::vector<double> parse_lambdas(const std::string& text) {
  const std::string prefix = "logspace:";
  if (text.rfind(prefix, 0) != 0) {
    throw DataError("--lambdas must be logspace:LO:HI:K");
  }
  double lo = 0;
  double hi = 0;
  long count = 0;
  std::string rest = text.substr(prefix.size());
  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = rest.find(':', start);
    pieces.push_back(rest.substr(start, colon == std::string::npos
                                            ? std::string::npos
                                            : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (pieces.size() != 3) throw DataError("--lambdas must be logspace:LO:HI:K");
  try {
    std::size_t used = 0;
    lo = std::stod(pieces[0], &used);
    if (used != pieces[0].size()) throw DataError("bad LO");
    hi = std::stod(pieces[1], &used);
    if (used != pieces[1].size()) throw DataError("bad HI");
    count = std::stol(pieces[2], &used);
    if (used != pieces[2].size()) throw DataError("bad K");
  } catch (const std::exception&) {
    throw DataError("--lambdas must be logspace:LO:HI:K with numeric LO, HI, K");
  }
  if (!(lo > 0) || !(hi > 0) || count < 1) {
    throw DataError("--lambdas: LO and HI must be positive and K at least 1");
  }
  std::vector<double> lambdas(static_cast<std::size_t>(count));
  const double log_lo = std::log10(lo);
  const double log_hi = std::log10(hi);
  for (long k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0
                                   : static_cast<double>(k) /
                                         static_cast<double>(count - 1);
    lambdas[static_cast<std::size_t>(k)] =
        std::pow(10.0, log_lo + frac * (log_hi - log_lo));
  }
  return lambdas;
}

RVector load_times(const std::string& path) {
  const RMatrix t = read_any_matrix(path).as_real();
  if (t.rows() != 1 && t.cols() != 1) {
    throw DataError("times file must be a row or column vector: " + path);
  }
  if (t.cols() == 1) return t.col(0);
  return t.row(0).transpose();
}

struct FitFlags {
  std::string data;
  std::string times;
  std::string out;
  int rank = 1;
  std::string method = "optdmd";
  std::string reg = "none";
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double eta = 1.0;
  std::string constraint = "none";
  std::string global_local = "on";
  std::string debias = "on";
  double tau_active = 0.1;
  double tau_global = 0.5;
  long long compress = -1;  // -1: library heuristic; 0: off
  double outer_tol = 1e-6;
  double inner_tol = 1e-6;
  int outer_max = 200;
  int inner_max = 1000;
  double pinv_rtol = 1e-12;
  unsigned long seed = 0;
};

SolverConfig make_config(const FitFlags& flags) {
  SolverConfig config;
  config.method = parse_method(flags.method);
  config.rank = flags.rank;
  config.regularizer = RegularizerSpec{parse_reg(flags.reg), flags.lambda1,
                                       flags.lambda2};
  config.eta = flags.eta;
  parse_constraint_text(flags.constraint, config.constraint);
  if (flags.compress >= 0) config.compression_rank = flags.compress;
  config.outer_tol = flags.outer_tol;
  config.inner_tol = flags.inner_tol;
  config.outer_max_iter = flags.outer_max;
  config.inner_max_iter = flags.inner_max;
  config.tau_active = flags.tau_active;
  config.tau_global = flags.tau_global;
  config.global_local_enabled = flags.global_local == "on";
  config.debiased_jacobian = flags.debias == "on";
  config.pinv_rtol = flags.pinv_rtol;
  config.seed = flags.seed;
  return config;
}

// Shared flag set for fit and sweep.
void add_fit_flags(CLI::App* cmd, FitFlags& flags, bool sweep_mode) {
  cmd->add_option("--data", flags.data, "Snapshot matrix (.cmx/.rmx or CSV)")
      ->required();
  cmd->add_option("--times", flags.times, "Sample-time vector (.rmx or CSV)")
      ->required();
  cmd->add_option("--rank", flags.rank, "Number of modes to fit")
      ->required()
      ->check(CLI::PositiveNumber);
  if (sweep_mode) {
    cmd->add_option("--method", flags.method, "Fitting method")
        ->check(CLI::IsMember({"sr3", "fista"}))
        ->required();
  } else {
    cmd->add_option("--method", flags.method, "Fitting method")
        ->check(CLI::IsMember({"optdmd", "fista", "sr3"}));
  }
  cmd->add_option("--reg", flags.reg, "Sparsity penalty on local modes")
      ->check(CLI::IsMember({"none", "l0", "l1", "l0l2", "l1l2"}));
  cmd->add_option("--lambda1", flags.lambda1, "Penalty strength")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda2", flags.lambda2, "Quadratic penalty strength")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--eta", flags.eta, "SR3 relaxation strength")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--constraint", flags.constraint,
                  "Eigenvalue constraint: none|imag|lhp|disc:RE:IM:RADIUS")
      ->check([](const std::string& text) -> std::string {
        ConstraintSet unused;
        return parse_constraint_text(text, unused)
                   ? std::string()
                   : "expected none|imag|lhp|disc:RE:IM:RADIUS";
      });
  cmd->add_option("--global-local", flags.global_local,
                  "Detect dense modes and exempt them from the penalty")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--debias-jacobian", flags.debias,
                  "Project the eigenvalue Jacobian on the SR3 path")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--tau-active", flags.tau_active,
                  "Relative magnitude for an entry to count as active")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--tau-global", flags.tau_global,
                  "Active fraction above which a mode is global")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--compress", flags.compress,
                  "Feature compression rank for optdmd (0 disables)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--outer-tol", flags.outer_tol,
                  "Relative objective-change stop for eigenvalue steps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inner-tol", flags.inner_tol,
                  "Relative change stop for mode updates")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--outer-max", flags.outer_max, "Eigenvalue iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inner-max", flags.inner_max, "Mode-update iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pinv-rtol", flags.pinv_rtol,
                  "Relative singular-value cutoff for pseudoinverses");
  cmd->add_option("--seed", flags.seed, "Seed recorded with the run");
}

Index count_global(const std::vector<bool>& mask) {
  Index total = 0;
  for (bool g : mask) total += g ? 1 : 0;
  return total;
}

int cmd_generate_video(const VideoSpec& spec, const std::string& out_dir) {
  const VideoData data = gen_synthetic_video(spec);
  std::filesystem::create_directories(out_dir);
  write_matrix(out_dir + "/clean.cmx", data.clean.data);
  write_matrix(out_dir + "/noisy.cmx", data.noisy.data);
  write_matrix(out_dir + "/times.rmx", RMatrix(data.clean.times));
  FitReport truth_report;
  truth_report.converged = true;
  truth_report.global_mask =
      detect_global_modes(data.truth.phi_b, 0.1, 0.5).is_global;
  write_model(out_dir + "/truth.model", data.truth, truth_report);
  std::fprintf(stderr, "wrote %s/{clean.cmx,noisy.cmx,times.rmx,truth.model}\n",
               out_dir.c_str());
  return 0;
}

int cmd_generate_well(const WellSpec& spec, double sigma, unsigned long seed,
                      const std::string& out_dir) {
  const auto states = solve_bound_states(spec.V0, spec.a, 1e-13);
  const SpectrumSample sample = default_spectrum_sample(states.size());
  const WellData data = gen_square_well_dataset(spec, sample, sigma, seed);
  std::filesystem::create_directories(out_dir);
  write_matrix(out_dir + "/clean.cmx", data.clean.data);
  write_matrix(out_dir + "/noisy.cmx", data.noisy.data);
  write_matrix(out_dir + "/times.rmx", RMatrix(data.clean.times));

  // The truth model keeps the bound components only; the scattering tail has
  // more terms than spatial samples and is not a valid mode model.
  const auto n_bound = static_cast<Index>(states.size());
  DmdModel truth;
  truth.rank = n_bound;
  truth.omega.resize(n_bound);
  truth.phi_b.resize(data.clean.data.rows(), n_bound);
  for (Index j = 0; j < n_bound; ++j) {
    truth.omega(j) = Complex(0.0, -data.truth[static_cast<std::size_t>(j)].energy);
    truth.phi_b.col(j) = data.truth[static_cast<std::size_t>(j)].mode;
  }
  FitReport truth_report;
  truth_report.converged = true;
  truth_report.global_mask = detect_global_modes(truth.phi_b, 0.1, 0.5).is_global;
  write_model(out_dir + "/truth.model", truth, truth_report);
  std::fprintf(stderr, "wrote %s/{clean.cmx,noisy.cmx,times.rmx,truth.model}\n",
               out_dir.c_str());
  return 0;
}

int cmd_fit(const FitFlags& flags) {
  const CMatrix data = read_any_matrix(flags.data).as_complex();
  const SnapshotSet snapshots = validate_snapshots(data, load_times(flags.times));
  const auto [model, report] = fit(snapshots, make_config(flags));
  write_model(flags.out, model, report);
  std::printf("iterations=%d objective=%.6e n_global=%lld\n",
              report.outer_iterations, report.final_objective,
              static_cast<long long>(count_global(report.global_mask)));
  return 0;
}

int cmd_reconstruct(const std::string& model_path, const std::string& times_path,
                    const std::string& out_path) {
  const auto [model, report] = read_model(model_path);
  (void)report;
  write_matrix(out_path, reconstruct(model, load_times(times_path)));
  return 0;
}

int cmd_eval(const std::string& estimate_path, const std::string& reference_path) {
  const CMatrix estimate = read_any_matrix(estimate_path).as_complex();
  const CMatrix reference = read_any_matrix(reference_path).as_complex();
  const double err = relative_error(estimate, reference);
  if (err == 0.0) {
    std::printf("0.000000\n");
  } else {
    std::printf("%.5e\n", err);
  }
  return 0;
}

int cmd_sweep(const FitFlags& flags, const std::string& lambdas_text,
              const std::string& reference_path, const std::string& table_path) {
  const std::vector<double> lambdas = parse_lambdas(lambdas_text);
  const CMatrix data = read_any_matrix(flags.data).as_complex();
  const SnapshotSet snapshots = validate_snapshots(data, load_times(flags.times));
  const CMatrix reference =
      reference_path.empty() ? snapshots.data
                             : read_any_matrix(reference_path).as_complex();

  SolverConfig config = make_config(flags);
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (const double lambda : lambdas) {
    config.regularizer.lambda1 = lambda;
    const auto [model, report] = fit(snapshots, config);
    SweepRow row;
    row.lambda = lambda;
    row.rel_error = relative_error(reconstruct(model, snapshots.times), reference);
    Index nonzero = 0;
    for (Index j = 0; j < model.phi_b.cols(); ++j) {
      for (Index i = 0; i < model.phi_b.rows(); ++i) {
        nonzero += model.phi_b(i, j) != Complex(0.0, 0.0) ? 1 : 0;
      }
    }
    row.nonzero_fraction = static_cast<double>(nonzero) /
                           static_cast<double>(model.phi_b.size());
    row.n_global = count_global(report.global_mask);
    rows.push_back(row);
    std::fprintf(stderr, "lambda=%.6g rel_error=%.6g nonzero=%.4f n_global=%lld\n",
                 row.lambda, row.rel_error, row.nonzero_fraction,
                 static_cast<long long>(row.n_global));
  }
  write_sweep_table(table_path, rows);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Sparse-mode exponential fitting of snapshot data"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a ground-truth dataset");
  generate->require_subcommand(1);
  VideoSpec video_spec;
  std::string video_out;
  auto* video = generate->add_subcommand(
      "video", "Oscillating-patterns video (gradient, Gaussian, square)");
  video->add_option("--out", video_out, "Output directory")->required();
  video->add_option("--height", video_spec.height, "Frame height in pixels")
      ->check(CLI::PositiveNumber);
  video->add_option("--width", video_spec.width, "Frame width in pixels")
      ->check(CLI::PositiveNumber);
  video->add_option("--frames", video_spec.n_frames, "Number of frames")
      ->check(CLI::PositiveNumber);
  video->add_option("--dt", video_spec.dt, "Seconds between frames")
      ->check(CLI::PositiveNumber);
  video->add_option("--sigma", video_spec.noise_sigma, "Noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  video->add_option("--seed", video_spec.seed, "Noise seed");

  WellSpec well_spec;
  double well_sigma = 0.15;
  unsigned long well_seed = 0;
  std::string well_out;
  auto* well = generate->add_subcommand(
      "squarewell", "Square-well wavefunction superposition");
  well->add_option("--out", well_out, "Output directory")->required();
  well->add_option("--v0", well_spec.V0, "Well depth")->check(CLI::PositiveNumber);
  well->add_option("--a", well_spec.a, "Well half-width")->check(CLI::PositiveNumber);
  well->add_option("--xmin", well_spec.x_min, "Domain lower edge");
  well->add_option("--xmax", well_spec.x_max, "Domain upper edge");
  well->add_option("--dx", well_spec.dx, "Grid spacing")->check(CLI::PositiveNumber);
  well->add_option("--tcount", well_spec.t_count, "Number of snapshots")
      ->check(CLI::PositiveNumber);
  well->add_option("--dt", well_spec.dt_snapshot, "Time between snapshots")
      ->check(CLI::PositiveNumber);
  well->add_option("--sigma", well_sigma, "Noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  well->add_option("--seed", well_seed, "Noise seed");

  // fit
  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an exponential mode model");
  add_fit_flags(fit_cmd, fit_flags, /*sweep_mode=*/false);
  fit_cmd->add_option("--out", fit_flags.out, "Model output path")->required();

  // reconstruct
  std::string rec_model, rec_times, rec_out;
  auto* rec = app.add_subcommand("reconstruct",
                                 "Evaluate a fitted model on a time grid");
  rec->add_option("--model", rec_model, "Model file")->required();
  rec->add_option("--times", rec_times, "Sample-time vector")->required();
  rec->add_option("--out", rec_out, "Output matrix (.cmx)")->required();

  // eval
  std::string eval_estimate, eval_reference;
  auto* eval_cmd = app.add_subcommand("eval", "Relative Frobenius error");
  eval_cmd->add_option("--estimate", eval_estimate, "Estimate matrix")->required();
  eval_cmd->add_option("--reference", eval_reference, "Reference matrix")->required();

  // sweep
  FitFlags sweep_flags;
  sweep_flags.method = "sr3";
  std::string sweep_lambdas, sweep_reference, sweep_out;
  auto* sweep = app.add_subcommand(
      "sweep", "Fit across a ladder of penalty strengths and tabulate errors");
  add_fit_flags(sweep, sweep_flags, /*sweep_mode=*/true);
  sweep->add_option("--lambdas", sweep_lambdas, "Ladder spec: logspace:LO:HI:K")
      ->required()
      ->check([](const std::string& text) -> std::string {
        try {
          parse_lambdas(text);
          return {};
        } catch (const DataError& e) {
          return e.what();
        }
      });
  sweep->add_option("--reference", sweep_reference,
                    "Error reference matrix (defaults to --data)");
  sweep->add_option("--out", sweep_out, "Sweep table output path (CSV)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (video->parsed()) return cmd_generate_video(video_spec, video_out);
    if (well->parsed()) {
      return cmd_generate_well(well_spec, well_sigma, well_seed, well_out);
    }
    if (fit_cmd->parsed()) return cmd_fit(fit_flags);
    if (rec->parsed()) return cmd_reconstruct(rec_model, rec_times, rec_out);
    if (eval_cmd->parsed()) return cmd_eval(eval_estimate, eval_reference);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_flags, sweep_lambdas, sweep_reference, sweep_out);
    }
    return 1;
  } catch (const StagnationError& e) {
    std::fprintf(stderr, "numerical failure: %s (last objective %.17g)\n", e.what(),
                 e.last_objective());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace sparsemode
