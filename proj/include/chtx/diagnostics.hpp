#pragma once

#include <optional>
#include <vector>

#include "chtx/model.hpp"
#include "chtx/operators.hpp"
#include "chtx/thresholds.hpp"
#include "chtx/weights.hpp"

namespace chtx {

/// Time series of the boundedness diagnostics along a run. All series share
/// the length of times; local_lp holds one series per configured exponent.
struct DiagnosticsTrace {
  std::vector<double> times;
  std::vector<double> sup_u;
  std::vector<double> sup_v;
  std::vector<double> sup_grad_v;
  std::vector<double> p_list;
  std::vector<std::vector<double>> local_lp;  // [p index][record]
  std::vector<double> weighted_energy;
  std::vector<double> lyapunov;
  double lyapunov_bound = 0.0;
  std::optional<double> blown_up_at;

  std::size_t records() const { return times.size(); }
};

/// Inputs for the Lyapunov functional int u^p e^{sigma v^2} psi and its
/// a-priori bound max(initial value, (M / (b K_p))^p), where
///   M   = max_{0<=v<=sup_v0} a + kappa1^2/(4 eps (p-1))
///         + (chi - 2 sigma v/(tau p))^2 kappa1^2/(4 eps'),
///   K_p = (e^{sigma sup_v0^2} int psi)^{-1/p}.
struct LyapunovSpec {
  double p = 2.0;
  SigmaCoefficients sigma;
  Field psi;
  double M = 0.0;
  double K_p = 0.0;
  double eps = 1e-2;
  double eps_prime = 1e-2;
  double kappa1 = 1.0;
  double b = 1.0;
  double sup_v0 = 0.0;
};

/// Largest kappa1 in {1, 1/2, 1/4, ...} meeting the smallness requirements
/// |chi| kappa1 (p/(p+1) + (p-1)/(p+1)) < eps and
/// |chi| kappa1 (1/(p+1) + (p-1)/(p (p+1))) < eps.
double default_kappa1(double chi, double p, double eps = 1e-2);

/// Builds a LyapunovSpec for a consumption model; psi must be the sampled
/// weight whose kappa1 is passed alongside. M's maximum over v is attained
/// at an endpoint of [0, sup_v0] because the v-dependence is convex.
LyapunovSpec make_lyapunov_spec(const ModelSpec& model, int n, double p,
                                double sup_v0, const Field& psi, double kappa1,
                                double eps = 1e-2, double eps_prime = 1e-2);

/// int_{B(x0,1)} u^p for every ball center x0 (all grid points), computed by
/// FFT convolution of u^p with the sampled sharp indicator of the unit ball
/// (1 inside, 0 outside, 1/2 within h/2 of the shell). Requires half_width
/// >= 2 and h <= 0.5.
Field local_lp_field(const Field& u, double p, const SpectralPlan& plan);

/// sup over ball centers of int_{B(x0,1)} u^p: the max of local_lp_field.
double local_lp_sup(const Field& u, double p, const SpectralPlan& plan);

/// Volume of the unit ball in dimension n (2, pi, 4 pi/3 for n = 1, 2, 3).
double unit_ball_volume(int n);

/// Rectangle-rule value of int u^p e^{sigma v^2} psi. Consumption only;
/// v must stay within [0, sup_v0] up to tolerance or the comparison
/// principle has been violated.
double lyapunov(const State& state, const LyapunovSpec& spec);

/// max(lyapunov(initial, spec), (M / (b K_p))^p).
double lyapunov_bound(const State& initial, const LyapunovSpec& spec);

/// Per-run diagnostics configuration: which exponents to record, the weight,
/// and optionally the Lyapunov functional.
struct DiagnosticsConfig {
  std::vector<double> p_list{2.0};
  Field psi;
  std::optional<LyapunovSpec> lyap;
};

/// Appends one record at state.t. After a blow-up record no further appends
/// occur; the blow-up time is stored once.
void record(const State& state, DiagnosticsTrace& trace,
            const DiagnosticsConfig& cfg, const SpectralPlan& plan);

/// Plateau heuristic for a CompletedBounded run: max of the last quarter of
/// a local_lp series is at most twice the max of the middle half.
bool plateaued(const std::vector<double>& series);

}  // namespace chtx
