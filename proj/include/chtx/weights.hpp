#pragma once

#include <array>

#include "chtx/model.hpp"

namespace chtx {

/// Product-form exponentially decaying weight
///   psi(x) = prod_i 1 / (e^{kappa2 (x_i - c_i)} + e^{-kappa2 (x_i - c_i)})
/// with kappa2 = min(kappa1 / sqrt(n), sqrt(kappa1 / (2n))), which gives the
/// pointwise bounds
///   0 < psi <= e^{-kappa2 |x - c|},  |grad psi| <= kappa1 psi,
///   |lap psi| <= kappa1 psi.
struct WeightSpec {
  double kappa1 = 1.0;
  double kappa2 = 0.0;  // derived
  int n = 1;
  std::array<double, 3> center{0.0, 0.0, 0.0};

  static WeightSpec make(double kappa1, int n,
                         std::array<double, 3> center = {0.0, 0.0, 0.0});
};

/// Samples psi on the grid.
Field make_psi(const WeightSpec& spec, const Grid& grid);

/// psi at an arbitrary point, from the closed form.
double psi_value(const WeightSpec& spec, const std::array<double, 3>& x);
/// Analytic gradient, psi_{x_i} = -psi kappa2 tanh(kappa2 (x_i - c_i)).
std::array<double, 3> psi_gradient(const WeightSpec& spec,
                                   const std::array<double, 3>& x);
/// Analytic Laplacian, psi kappa2^2 (2 sum_i tanh^2(kappa2 (x_i - c_i)) - n).
double psi_laplacian(const WeightSpec& spec, const std::array<double, 3>& x);

/// Rectangle-rule quadrature of the weighted integral of u^p against psi,
/// h^n sum u^p psi. Requires p >= 1 and u >= 0 up to the positivity slack;
/// sub-slack negatives are treated as zero so fractional powers stay real.
double weighted_lp(const Field& u, const Field& psi, double p);

}  // namespace chtx
