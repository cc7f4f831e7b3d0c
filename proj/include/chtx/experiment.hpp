#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chtx/diagnostics.hpp"
#include "chtx/model.hpp"
#include "chtx/solver.hpp"
#include "chtx/thresholds.hpp"

namespace chtx {

/// One initial datum. Cosine varies along the first axis only; random_smooth
/// is a nonnegative band-limited field with seeded random phases.
struct InitialSpec {
  enum class Kind { Constant, Gaussian, Cosine, RandomSmooth };
  Kind kind = Kind::Constant;
  double value = 0.0;                      // constant
  double amplitude = 1.0;                  // gaussian / random_smooth
  double width = 1.0;                      // gaussian
  std::array<double, 3> center{0, 0, 0};   // gaussian
  double background = 0.0;                 // gaussian / random_smooth
  double base = 0.0;                       // cosine
  double amp = 0.0;                        // cosine
  int mode = 1;                            // cosine
  int modes = 3;                           // random_smooth band limit

  bool operator==(const InitialSpec&) const = default;
};

Field build_initial(const InitialSpec& spec, const Grid& grid, unsigned seed);

/// Multiplies every amplitude-like entry so the analytic sup becomes target.
void scale_initial_sup(InitialSpec& spec, double target);

/// A full experiment: model, grid, solver, initial data, and diagnostics.
struct ExperimentConfig {
  Variant variant = Variant::Consumption;
  double chi = 1.0, a = 1.0, b = 1.0, lambda = 1.0, mu = 1.0, tau = 1.0;

  int dim = 1;
  double half_width = 10.0;
  int points = 256;

  SolverConfig solver;

  InitialSpec initial_u;
  InitialSpec initial_v;

  std::vector<double> p_list{2.0};
  double kappa1 = 0.0;       // 0 => halving-search default
  bool lyapunov = false;
  double lyapunov_p = 0.0;   // 0 => max(1, n/2) + 1/2

  unsigned seed = 0;
  std::string output_dir = "out";

  ModelSpec model() const;
  Grid make_grid() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// JSON (de)serialization; round-trips bit-exactly. Parsing rejects model
/// keys that do not apply to the chosen variant.
std::string to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const std::string& text);

std::optional<double> analytic_sup(const InitialSpec& spec);

/// Builds the diagnostics bundle (weight, exponents, optional Lyapunov spec)
/// for a config, given its sampled initial data.
DiagnosticsConfig make_diagnostics(const ExperimentConfig& cfg, const Grid& grid,
                                   const Field& v0);

/// Runs one experiment; when write_outputs is set, emits trace.csv,
/// final-state snapshots, an echo of the config, and a plot script under
/// cfg.output_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg, bool write_outputs = false);

struct SweepAxis {
  std::string param;  // chi | b | mu | tau | sup_v0
  std::vector<double> values;
};

struct SweepConfig {
  ExperimentConfig base;
  std::vector<SweepAxis> axes;  // 1 or 2
  int parallelism = 1;
  std::size_t cap = 256;
};

std::string to_json(const SweepConfig& cfg);
SweepConfig sweep_from_json(const std::string& text);

struct SweepRow {
  std::vector<double> axis_values;
  ThresholdReport report;
  RunClass classified = RunClass::CompletedBounded;
  double t_stop = 0.0;
  double max_local_lp = 0.0;
  bool plateau = false;
};

/// Runs the cartesian product of the axes, cells distributed over up to
/// parallelism (capped by CHTX_THREADS) worker threads. Row order follows the
/// axis order regardless of scheduling. Per-cell traces are written beneath
/// output_dir when write_outputs is set; a StepCollapse cell is recorded, not
/// fatal.
std::vector<SweepRow> sweep(const SweepConfig& cfg, bool write_outputs = false);

void write_sweep_summary(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                         const std::filesystem::path& path);

}  // namespace chtx
