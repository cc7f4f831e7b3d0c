#pragma once

#include <string>
#include <vector>

#include "chtx/model.hpp"

namespace chtx {

/// Intermediate quantities of the explicit constant D*_{tau,n}:
///   n_star = max(1, n/2),  tau_star = 1/tau - 1,  j = sign(chi tau_star),
///   alpha  = sqrt(tau_star^2 / 4 + 1 / (tau n_star)).
struct DStarInputs {
  double tau = 1.0;
  int n = 1;
  double chi = 1.0;
  double n_star = 1.0;
  double tau_star = 0.0;
  int j = 0;
  double alpha = 1.0;

  static DStarInputs make(double tau, int n, double chi);
};

/// D*_{tau,n}: 2/(tau n_star) (2 alpha + j |tau_star|)^{-1} when
/// alpha > -j |tau_star|, else 2/(tau n_star) alpha^{-1}. Strictly positive.
double dstar(double tau, int n, double chi);

/// The parabolic maximal-regularity constant bound
///   C_{gamma,n} = C^gamma (gamma-2)^{1-gamma} 2^{9 n (gamma-2)}
/// with C the configurable absolute constant. log_value never overflows for
/// gamma up to 64 and n up to 12; value itself may not be representable there.
struct CgammaBound {
  double gamma = 3.0;
  int n = 1;
  double abs_const = 1.0;
  double log_value = 0.0;
  double value = 0.0;

  static CgammaBound make(double gamma, int n, double abs_const);
};

/// Convenience accessor for CgammaBound::value (requires gamma > 2).
double cgamma_bound(double gamma, int n, double abs_const);
/// Natural log of the bound, computed as a sum of logs.
double cgamma_log(double gamma, int n, double abs_const);

/// Log-spaced default grid of 256 points in (max(1, n/2), 64], endpoints
/// strictly above the open lower limit.
std::vector<double> default_gamma_grid(int n, int points = 256);

/// Grid lower bound for C*_n = sup_{gamma > max(1, n/2)}
/// gamma/(gamma-1) (C_{gamma+1,n})^{-1/(gamma+1)}. Any finite grid
/// under-approximates the supremum, so a "true" verdict built on this value
/// is sound for the chosen abs_const. Scales exactly as 1/abs_const.
double cstar_lower(int n, double abs_const, const std::vector<double>& gamma_grid);

/// Coefficients of the quadratic inequality A sigma^2 v^2 + B < C sigma +
/// D sigma v behind the Lyapunov weight phi(v) = e^{sigma v^2}, plus the
/// selected sigma branch.
struct SigmaCoefficients {
  double p = 2.0;
  double tau = 1.0;
  double chi = 1.0;
  double sup_v0 = 0.0;
  double A = 0.0;
  double B = 0.0;
  double Ccoef = 0.0;
  double D = 0.0;
  double eps2 = 1e-6;       // epsilon'' for the D >= sqrt(AB) branch
  bool second_branch = false;
  double sigma = 0.0;
  double threshold = 0.0;   // admissible |chi| ||v0||_inf for this p
  bool condition_ok = false;
};

/// Builds the sigma construction for the consumption model. Requires
/// chi != 0 and p > max(1, n/2).
SigmaCoefficients sigma_coefficients(const ModelSpec& model, int n, double p,
                                     double sup_v0, double eps2 = 1e-6);

/// Default Lyapunov exponent, max(1, n/2) + 1/2.
double default_p(int n);

/// Evaluated constants and per-theorem verdicts for one parameter point.
struct ThresholdReport {
  double dstar = 0.0;        // NaN when the variant has no tau
  double cstar_lower = 0.0;
  double abs_const = 1.0;
  bool thm12_ok = false;
  bool thm13_ok = false;
  bool thm14_ok = false;
  bool rmk15_ok = false;
  std::string binding;
};

/// Evaluates the sufficient conditions of the three boundedness theorems and
/// the chi mu < 4 b / n remark for the given model. Verdicts that rest on
/// cstar_lower are sound but not complete; conditions that do not apply to
/// the variant are reported false with an "n/a" note in binding.
ThresholdReport check_conditions(const ModelSpec& model, int n, double sup_v0,
                                 double abs_const = 1.0);

std::string format_report(const ThresholdReport& r);

}  // namespace chtx
