#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "chtx/model.hpp"

namespace chtx {

/// FFT plans plus wavenumbers for one Grid. The plan is immutable after
/// construction; every operation runs on per-call scratch buffers, so one
/// plan may be shared across threads.
///
/// Wavenumbers are k_d = pi * m / L for integer frequencies m in [-N/2, N/2).
/// First derivatives zero the Nyquist mode (|m| = N/2); the Laplacian keeps
/// its full real symbol -|k|^2.
class SpectralPlan {
 public:
  explicit SpectralPlan(const Grid& grid);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;
  SpectralPlan(SpectralPlan&&) noexcept;
  SpectralPlan& operator=(SpectralPlan&&) noexcept;

  const Grid& grid() const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

/// Spectral Laplacian; exact for band-limited fields.
Field laplacian(const Field& f, const SpectralPlan& plan);

/// Spectral first derivatives, one Field per axis.
std::vector<Field> gradient(const Field& f, const SpectralPlan& plan);

/// Spectral divergence of a vector field (one component per axis).
Field divergence(const std::vector<Field>& comps, const SpectralPlan& plan);

/// Applies e^{(lap - shift I) t / scale}: multiplies the spectrum by
/// exp(-(|k|^2 + shift) t / scale). t = 0 is the identity. shift = 1,
/// scale = 1 is the semigroup generated by lap - I; shift = lambda,
/// scale = tau is the scaled signal semigroup.
Field heat_semigroup(const Field& f, double t, double shift, double scale,
                     const SpectralPlan& plan);

/// Solves lap(v) - lambda v + mu u = 0: spectrum mu * u_hat / (lambda + |k|^2).
Field elliptic_resolve(const Field& u, double lambda, double mu,
                       const SpectralPlan& plan);

/// Discrete circular convolution c[i] = sum_j a[j] b[i-j] (index arithmetic
/// modulo N per axis), computed spectrally.
Field spectral_convolve(const Field& a, const Field& b, const SpectralPlan& plan);

/// Evaluates both sides of the gradient-semigroup estimate
///   ||e^{(lap - I)t} div f||_inf <= (n/sqrt(pi)) t^{-1/2} e^{-t} ||f||_inf
/// on the grid and returns (lhs, rhs) for the caller to assert.
std::pair<double, double> semigroup_gradient_bound_check(
    const std::vector<Field>& f, double t, const SpectralPlan& plan);

}  // namespace chtx
