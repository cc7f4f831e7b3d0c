#include "chtx/thresholds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chtx {

namespace {
int sign_of(double x) { return (x > 0.0) - (x < 0.0); }
}  // namespace

DStarInputs DStarInputs::make(double tau, int n, double chi) {
  if (!(tau > 0.0)) throw std::invalid_argument("dstar: tau must be > 0");
  if (n < 1) throw std::invalid_argument("dstar: n must be >= 1");
  DStarInputs d;
  d.tau = tau;
  d.n = n;
  d.chi = chi;
  d.n_star = std::max(1.0, n / 2.0);
  d.tau_star = 1.0 / tau - 1.0;
  d.j = sign_of(chi * d.tau_star);
  d.alpha = std::sqrt(d.tau_star * d.tau_star / 4.0 + 1.0 / (tau * d.n_star));
  return d;
}

double dstar(double tau, int n, double chi) {
  const DStarInputs d = DStarInputs::make(tau, n, chi);
  const double jt = d.j * std::abs(d.tau_star);
  if (d.alpha > -jt) return 2.0 / (tau * d.n_star) / (2.0 * d.alpha + jt);
  return 2.0 / (tau * d.n_star) / d.alpha;
}

double cgamma_log(double gamma, int n, double abs_const) {
  if (!(gamma > 2.0)) throw std::invalid_argument("cgamma_bound: gamma must be > 2");
  if (!(abs_const > 0.0))
    throw std::invalid_argument("cgamma_bound: abs_const must be > 0");
  return gamma * std::log(abs_const) + (1.0 - gamma) * std::log(gamma - 2.0) +
         9.0 * n * (gamma - 2.0) * std::numbers::ln2;
}

CgammaBound CgammaBound::make(double gamma, int n, double abs_const) {
  CgammaBound b;
  b.gamma = gamma;
  b.n = n;
  b.abs_const = abs_const;
  b.log_value = cgamma_log(gamma, n, abs_const);
  b.value = std::exp(b.log_value);
  return b;
}

double cgamma_bound(double gamma, int n, double abs_const) {
  return CgammaBound::make(gamma, n, abs_const).value;
}

std::vector<double> default_gamma_grid(int n, int points) {
  const double lo = std::max(1.0, n / 2.0);
  const double hi = 64.0;
  std::vector<double> grid;
  grid.reserve(points);
  for (int i = 1; i <= points; ++i)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / points));
  return grid;
}

double cstar_lower(int n, double abs_const, const std::vector<double>& gamma_grid) {
  if (gamma_grid.empty()) throw std::invalid_argument("cstar_lower: empty gamma grid");
  if (!(abs_const > 0.0))
    throw std::invalid_argument("cstar_lower: abs_const must be > 0");
  const double lo = std::max(1.0, n / 2.0);
  double best = 0.0;
  for (double g : gamma_grid) {
    if (!(g > lo))
      throw std::invalid_argument("cstar_lower: grid value not above max(1, n/2)");
    // abs_const enters as (C^{gamma+1})^{-1/(gamma+1)} = 1/C; dividing at the
    // end keeps "double C => exactly half" bit-exact.
    const double base = cgamma_log(g + 1.0, n, 1.0);
    const double term =
        std::exp(std::log(g / (g - 1.0)) - base / (g + 1.0)) / abs_const;
    best = std::max(best, term);
  }
  return best;
}

double default_p(int n) { return std::max(1.0, n / 2.0) + 0.5; }

SigmaCoefficients sigma_coefficients(const ModelSpec& model, int n, double p,
                                     double sup_v0, double eps2) {
  if (model.variant() != Variant::Consumption)
    throw std::invalid_argument("sigma: construction applies to the consumption model");
  const double chi = model.chi();
  if (chi == 0.0) throw std::invalid_argument("sigma: chi must be nonzero");
  if (!(p > std::max(1.0, n / 2.0)))
    throw std::invalid_argument("sigma: p must exceed max(1, n/2)");
  if (!(eps2 > 0.0)) throw std::invalid_argument("sigma: eps2 must be > 0");
  if (sup_v0 < 0.0) throw std::invalid_argument("sigma: sup_v0 must be >= 0");
  const double tau = model.tau();
  const double tau_star = 1.0 / tau - 1.0;

  SigmaCoefficients c;
  c.p = p;
  c.tau = tau;
  c.chi = chi;
  c.sup_v0 = sup_v0;
  c.eps2 = eps2;
  c.A = tau_star * tau_star / (p - 1.0) + 4.0 / (tau * p * (p - 1.0));
  c.B = chi * chi * (p - 1.0) / 4.0;
  c.Ccoef = 2.0 / (tau * p);
  c.D = -chi * tau_star;

  const double root_ab = std::sqrt(c.A * c.B);
  if (c.D < root_ab) {
    c.second_branch = false;
    c.sigma = std::sqrt(c.B) * (2.0 * root_ab - c.D) / (c.Ccoef * std::sqrt(c.A));
  } else {
    c.second_branch = true;
    c.sigma = c.B / c.Ccoef + eps2;
  }

  // Admissibility of p: |chi| ||v0||_inf below the p-dependent analogue of
  // D*, with alpha = sqrt(tau_star^2/4 + 1/(tau p)).
  const double alpha = std::sqrt(tau_star * tau_star / 4.0 + 1.0 / (tau * p));
  const int j = sign_of(chi * tau_star);
  const double jt = j * std::abs(tau_star);
  c.threshold = (alpha > -jt) ? 2.0 / (tau * p * (2.0 * alpha + jt))
                              : 2.0 / (tau * p * alpha);
  c.condition_ok = std::abs(chi) * sup_v0 < c.threshold;
  return c;
}

ThresholdReport check_conditions(const ModelSpec& model, int n, double sup_v0,
                                 double abs_const) {
  if (n < 1) throw std::invalid_argument("check_conditions: n must be >= 1");
  if (sup_v0 < 0.0)
    throw std::invalid_argument("check_conditions: sup_v0 must be >= 0");
  if (!(model.b() > 0.0))
    throw std::invalid_argument("check_conditions: theorem checks require b > 0");

  ThresholdReport r;
  r.abs_const = abs_const;
  r.cstar_lower = cstar_lower(n, abs_const, default_gamma_grid(n));
  r.dstar = std::numeric_limits<double>::quiet_NaN();

  const double chi = model.chi();
  const double b = model.b();
  std::ostringstream binding;

  if (model.variant() == Variant::Consumption) {
    r.dstar = dstar(model.tau(), n, chi);
    const double bc = b * r.cstar_lower;
    const double bound = std::max(bc, r.dstar);
    r.thm12_ok = std::abs(chi) * sup_v0 < bound;
    binding << "thm12: |chi|*sup_v0=" << std::abs(chi) * sup_v0 << " vs max(b*Cstar="
            << bc << ", Dstar=" << r.dstar << ") via "
            << (bc >= r.dstar ? "Cstar" : "Dstar");
  } else {
    binding << "thm12: n/a (variant)";
  }

  if (model.variant() == Variant::ParabolicProduction) {
    const double mu = model.mu();
    r.thm13_ok = std::abs(chi) * mu < b * r.cstar_lower;
    r.rmk15_ok = chi * mu < 4.0 * b / n;
    binding << "; thm13: |chi|*mu=" << std::abs(chi) * mu << " vs b*Cstar="
            << b * r.cstar_lower;
    binding << "; rmk15: chi*mu=" << chi * mu << " vs 4b/n=" << 4.0 * b / n;
  } else {
    binding << "; thm13: n/a (variant); rmk15: n/a (variant)";
  }

  if (model.variant() == Variant::EllipticProduction) {
    const double mu = model.mu();
    if (n <= 2) {
      r.thm14_ok = true;
      binding << "; thm14: threshold +inf for n<=2";
    } else {
      const double bound = b * n / (n - 2.0);
      r.thm14_ok = chi * mu < bound;
      binding << "; thm14: chi*mu=" << chi * mu << " vs b*n/(n-2)=" << bound;
    }
  } else {
    binding << "; thm14: n/a (variant)";
  }

  r.binding = binding.str();
  return r;
}

std::string format_report(const ThresholdReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "Cstar_lower(abs_const=" << r.abs_const << ") = " << r.cstar_lower << "\n";
  if (std::isfinite(r.dstar)) os << "Dstar = " << r.dstar << "\n";
  os << "thm12_ok = " << (r.thm12_ok ? "true" : "false") << "\n"
     << "thm13_ok = " << (r.thm13_ok ? "true" : "false") << "\n"
     << "thm14_ok = " << (r.thm14_ok ? "true" : "false") << "\n"
     << "rmk15_ok = " << (r.rmk15_ok ? "true" : "false") << "\n"
     << "binding: " << r.binding << "\n";
  return os.str();
}

}  // namespace chtx
