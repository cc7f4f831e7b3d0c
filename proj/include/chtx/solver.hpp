#pragma once

#include <functional>
#include <string>

#include "chtx/diagnostics.hpp"
#include "chtx/model.hpp"
#include "chtx/operators.hpp"

namespace chtx {

enum class Scheme { IMEX1, IMEX2 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Time-stepping configuration. The effective step never exceeds dt and is
/// additionally capped each step by the advective restriction
/// safety * h / (|chi| max|grad v|) and the reaction restriction
/// safety / (a + 2 b max u), both guarded against division by zero.
struct SolverConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  double safety = 0.5;
  double blowup_sup_factor = 1e6;
  double blowup_abs = 1e12;
  Scheme scheme = Scheme::IMEX2;
  int snapshot_every = 10;
};

enum class RunClass { CompletedBounded, BlowUpDetected, StepCollapse };

std::string to_string(RunClass c);

/// Result of one run. BlowUpDetected is a numerical proxy for finite-time
/// blow-up: sup u exceeded blowup_sup_factor times its initial value, crossed
/// blowup_abs, or a non-finite value appeared.
struct RunOutcome {
  State final;
  RunClass classified = RunClass::CompletedBounded;
  double t_stop = 0.0;
  DiagnosticsTrace trace;
  bool positivity_ok = true;       // slack check after every accepted step
  double worst_positivity = 0.0;   // largest relative undershoot seen
  double max_sup_u = 0.0;          // over all accepted steps
};

/// Advances one accepted step: diffusion integrated exactly through the
/// Fourier symbol, chemotaxis transport and reactions explicit (Lawson-Euler
/// for IMEX1, Strang splitting around a Heun substep for IMEX2). For the
/// elliptic variant v is re-solved after the u update. Returns the new state;
/// dt_taken reports the effective step (0 means collapse below 1e-12).
State step(const State& state, const ModelSpec& model, const SolverConfig& cfg,
           const SpectralPlan& plan, double* dt_taken = nullptr);

/// Iterates step until t_end, blow-up, or step collapse, recording
/// diagnostics at the snapshot cadence (plus the initial and final states).
/// Deterministic for fixed inputs.
RunOutcome run(const State& initial, const ModelSpec& model,
               const SolverConfig& cfg, const SpectralPlan& plan,
               const DiagnosticsConfig* diagnostics = nullptr);

/// Fixed-point iteration of the mild-solution integral equations over a short
/// horizon, used to cross-validate step. Time integrals use the midpoint rule
/// on at most max_nodes subintervals. iterations = 0 returns the free
/// semigroup evolution of the initial data. Throws if successive iterates
/// start diverging (horizon too long for contraction).
State picard_mild(const State& initial, const ModelSpec& model,
                  const SolverConfig& cfg, const SpectralPlan& plan,
                  int iterations, double horizon, int max_nodes = 64,
                  std::vector<double>* iterate_distances = nullptr);

}  // namespace chtx
