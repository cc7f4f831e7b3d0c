#include "chtx/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace chtx {

namespace {

// 1 / (e^z + e^{-z}) without overflow for large |z|.
double inv_two_cosh(double z) {
  const double a = std::abs(z);
  const double e = std::exp(-a);
  return e / (1.0 + e * e);
}

}  // namespace

WeightSpec WeightSpec::make(double kappa1, int n, std::array<double, 3> center) {
  if (!(kappa1 > 0.0)) throw std::invalid_argument("WeightSpec: kappa1 must be > 0");
  if (n < 1 || n > 3) throw std::invalid_argument("WeightSpec: n must be 1, 2, or 3");
  WeightSpec s;
  s.kappa1 = kappa1;
  s.n = n;
  s.center = center;
  s.kappa2 = std::min(kappa1 / std::sqrt(static_cast<double>(n)),
                      std::sqrt(kappa1 / (2.0 * n)));
  return s;
}

double psi_value(const WeightSpec& spec, const std::array<double, 3>& x) {
  double p = 1.0;
  for (int i = 0; i < spec.n; ++i)
    p *= inv_two_cosh(spec.kappa2 * (x[i] - spec.center[i]));
  return p;
}

std::array<double, 3> psi_gradient(const WeightSpec& spec,
                                   const std::array<double, 3>& x) {
  const double psi = psi_value(spec, x);
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (int i = 0; i < spec.n; ++i)
    g[i] = -psi * spec.kappa2 * std::tanh(spec.kappa2 * (x[i] - spec.center[i]));
  return g;
}

double psi_laplacian(const WeightSpec& spec, const std::array<double, 3>& x) {
  const double psi = psi_value(spec, x);
  double sum_t2 = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double t = std::tanh(spec.kappa2 * (x[i] - spec.center[i]));
    sum_t2 += t * t;
  }
  return psi * spec.kappa2 * spec.kappa2 * (2.0 * sum_t2 - spec.n);
}

Field make_psi(const WeightSpec& spec, const Grid& grid) {
  if (grid.dim != spec.n)
    throw std::invalid_argument("make_psi: grid dimension does not match spec");
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    return psi_value(spec, x);
  });
}

double weighted_lp(const Field& u, const Field& psi, double p) {
  require_same_grid(u, psi, "weighted_lp");
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_lp: p must be >= 1");
  const double scale = std::max(1.0, max_value(u));
  if (min_value(u) < -kPositivityTol * scale)
    throw std::runtime_error("weighted_lp: u is negative beyond the positivity slack");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = std::max(0.0, u[i]);
    s += std::pow(ui, p) * psi[i];
  }
  double hn = 1.0;
  for (int d = 0; d < u.grid.dim; ++d) hn *= u.grid.spacing;
  return hn * s;
}

}  // namespace chtx
