#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "chtx/model.hpp"

namespace chtx::testing {

/// Band-limited random field: cosines on the lowest max_mode modes per axis
/// with 1/m-decaying random coefficients and random phases.
inline Field random_smooth(const Grid& g, std::mt19937_64& rng, int max_mode,
                           double amplitude = 1.0, double offset = 0.0) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  struct Wave {
    double c, ph;
    int mode, axis;
  };
  std::vector<Wave> waves;
  for (int axis = 0; axis < g.dim; ++axis)
    for (int m = 1; m <= max_mode; ++m)
      waves.push_back({coef(rng) / m, phase(rng), m, axis});
  return Field::sample(g, [&](const std::array<double, 3>& x) {
    double s = offset;
    for (const auto& w : waves)
      s += amplitude * w.c * std::cos(w.mode * M_PI / g.half_width * x[w.axis] + w.ph);
    return s;
  });
}

/// Nonnegative variant: oscillation bounded by the offset.
inline Field random_smooth_nonneg(const Grid& g, std::mt19937_64& rng, int max_mode,
                                  double amplitude = 0.5, double offset = 1.0) {
  Field f = random_smooth(g, rng, max_mode, amplitude, offset);
  const double m = min_value(f);
  if (m < 0.05 * offset)
    for (auto& x : f.values) x += 0.05 * offset - m;
  return f;
}

inline double linf_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace chtx::testing
