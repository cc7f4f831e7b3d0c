#include "chtx/operators.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace chtx {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Scratch {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  Scratch(std::size_t nreal, std::size_t ncplx) {
    real = fftw_alloc_real(nreal);
    cplx = fftw_alloc_complex(ncplx);
    if (!real || !cplx) {
      fftw_free(real);
      fftw_free(cplx);
      throw std::bad_alloc();
    }
  }
  ~Scratch() {
    fftw_free(real);
    fftw_free(cplx);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

}  // namespace

struct SpectralPlan::Impl {
  Grid grid;
  int rank = 1;
  int n = 8;                   // points per dimension
  int nc = 5;                  // N/2 + 1, complex extent of the last axis
  std::size_t nreal = 0;
  std::size_t ncplx = 0;
  double norm = 1.0;           // 1 / N^rank
  std::vector<double> k_full;  // k for full-axis index i (m = i or i - N)
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  double* plan_real = nullptr;
  fftw_complex* plan_cplx = nullptr;

  explicit Impl(const Grid& g) : grid(g) {
    rank = g.dim;
    n = g.points_per_dim;
    nc = n / 2 + 1;
    nreal = g.total();
    ncplx = 1;
    for (int d = 0; d < rank - 1; ++d) ncplx *= static_cast<std::size_t>(n);
    ncplx *= static_cast<std::size_t>(nc);
    norm = 1.0 / static_cast<double>(nreal);

    k_full.resize(n);
    const double base = M_PI / g.half_width;
    for (int i = 0; i < n; ++i) {
      const int m = (i < (n + 1) / 2) ? i : i - n;
      k_full[i] = base * m;
    }

    int dims[3] = {n, n, n};
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_real = fftw_alloc_real(nreal);
    plan_cplx = fftw_alloc_complex(ncplx);
    if (!plan_real || !plan_cplx) throw std::bad_alloc();
    fwd = fftw_plan_dft_r2c(rank, dims, plan_real, plan_cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r(rank, dims, plan_cplx, plan_real, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("SpectralPlan: FFTW planning failed");
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(plan_real);
    fftw_free(plan_cplx);
  }

  // Per-axis index of a linear complex index (last axis has extent nc).
  void unravel_cplx(std::size_t ci, int idx[3]) const {
    idx[rank - 1] = static_cast<int>(ci % static_cast<std::size_t>(nc));
    ci /= static_cast<std::size_t>(nc);
    for (int d = rank - 2; d >= 0; --d) {
      idx[d] = static_cast<int>(ci % static_cast<std::size_t>(n));
      ci /= static_cast<std::size_t>(n);
    }
  }

  double k_at(int axis, const int idx[3]) const {
    if (axis == rank - 1) return M_PI / grid.half_width * idx[axis];
    return k_full[idx[axis]];
  }

  bool nyquist(int axis, const int idx[3]) const {
    const int i = idx[axis];
    if (axis == rank - 1) return i == n / 2;
    return 2 * i == n;
  }

  void forward(const Field& f, fftw_complex* out, double* rbuf) const {
    for (std::size_t i = 0; i < nreal; ++i) rbuf[i] = f.values[i];
    fftw_execute_dft_r2c(fwd, rbuf, out);
  }

  Field backward(fftw_complex* spec, double* rbuf) const {
    fftw_execute_dft_c2r(bwd, spec, rbuf);
    Field out(grid);
    for (std::size_t i = 0; i < nreal; ++i) out.values[i] = rbuf[i] * norm;
    return out;
  }
};

SpectralPlan::SpectralPlan(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralPlan::~SpectralPlan() = default;
SpectralPlan::SpectralPlan(SpectralPlan&&) noexcept = default;
SpectralPlan& SpectralPlan::operator=(SpectralPlan&&) noexcept = default;

const Grid& SpectralPlan::grid() const { return impl_->grid; }

namespace {

void require_plan_grid(const Field& f, const SpectralPlan& plan, const char* what) {
  if (!(f.grid == plan.grid()))
    throw std::invalid_argument(std::string(what) + ": field grid does not match plan");
}

// Multiplies the spectrum of f by a real symbol sym(|k|^2).
template <typename Sym>
Field apply_real_symbol(const Field& f, const SpectralPlan& plan, Sym&& sym) {
  const auto& im = plan.impl();
  Scratch s(im.nreal, im.ncplx);
  im.forward(f, s.cplx, s.real);
  int idx[3] = {0, 0, 0};
  for (std::size_t ci = 0; ci < im.ncplx; ++ci) {
    im.unravel_cplx(ci, idx);
    double k2 = 0.0;
    for (int d = 0; d < im.rank; ++d) {
      const double k = im.k_at(d, idx);
      k2 += k * k;
    }
    const double m = sym(k2);
    s.cplx[ci][0] *= m;
    s.cplx[ci][1] *= m;
  }
  return im.backward(s.cplx, s.real);
}

}  // namespace

Field laplacian(const Field& f, const SpectralPlan& plan) {
  require_plan_grid(f, plan, "laplacian");
  return apply_real_symbol(f, plan, [](double k2) { return -k2; });
}

std::vector<Field> gradient(const Field& f, const SpectralPlan& plan) {
  require_plan_grid(f, plan, "gradient");
  const auto& im = plan.impl();
  Scratch s(im.nreal, im.ncplx);
  Scratch work(im.nreal, im.ncplx);
  im.forward(f, s.cplx, s.real);
  std::vector<Field> out;
  out.reserve(im.rank);
  int idx[3] = {0, 0, 0};
  for (int axis = 0; axis < im.rank; ++axis) {
    for (std::size_t ci = 0; ci < im.ncplx; ++ci) {
      im.unravel_cplx(ci, idx);
      const double k = im.nyquist(axis, idx) ? 0.0 : im.k_at(axis, idx);
      const double re = s.cplx[ci][0], imv = s.cplx[ci][1];
      work.cplx[ci][0] = -k * imv;  // multiply by i k
      work.cplx[ci][1] = k * re;
    }
    out.push_back(im.backward(work.cplx, work.real));
  }
  return out;
}

Field divergence(const std::vector<Field>& comps, const SpectralPlan& plan) {
  const auto& im = plan.impl();
  if (static_cast<int>(comps.size()) != im.rank)
    throw std::invalid_argument("divergence: one component per axis required");
  for (const auto& c : comps) require_plan_grid(c, plan, "divergence");
  Scratch acc(im.nreal, im.ncplx);
  Scratch s(im.nreal, im.ncplx);
  for (std::size_t ci = 0; ci < im.ncplx; ++ci) acc.cplx[ci][0] = acc.cplx[ci][1] = 0.0;
  int idx[3] = {0, 0, 0};
  for (int axis = 0; axis < im.rank; ++axis) {
    im.forward(comps[axis], s.cplx, s.real);
    for (std::size_t ci = 0; ci < im.ncplx; ++ci) {
      im.unravel_cplx(ci, idx);
      const double k = im.nyquist(axis, idx) ? 0.0 : im.k_at(axis, idx);
      acc.cplx[ci][0] += -k * s.cplx[ci][1];
      acc.cplx[ci][1] += k * s.cplx[ci][0];
    }
  }
  return im.backward(acc.cplx, acc.real);
}

Field heat_semigroup(const Field& f, double t, double shift, double scale,
                     const SpectralPlan& plan) {
  require_plan_grid(f, plan, "heat_semigroup");
  if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
  if (!(scale > 0.0)) throw std::invalid_argument("heat_semigroup: scale must be > 0");
  if (t == 0.0) return f;
  const double r = t / scale;
  return apply_real_symbol(f, plan,
                           [&](double k2) { return std::exp(-(k2 + shift) * r); });
}

Field elliptic_resolve(const Field& u, double lambda, double mu,
                       const SpectralPlan& plan) {
  require_plan_grid(u, plan, "elliptic_resolve");
  if (!(lambda > 0.0)) throw std::invalid_argument("elliptic_resolve: lambda must be > 0");
  return apply_real_symbol(u, plan,
                           [&](double k2) { return mu / (lambda + k2); });
}

Field spectral_convolve(const Field& a, const Field& b, const SpectralPlan& plan) {
  require_plan_grid(a, plan, "spectral_convolve");
  require_plan_grid(b, plan, "spectral_convolve");
  const auto& im = plan.impl();
  Scratch sa(im.nreal, im.ncplx);
  Scratch sb(im.nreal, im.ncplx);
  im.forward(a, sa.cplx, sa.real);
  im.forward(b, sb.cplx, sb.real);
  for (std::size_t ci = 0; ci < im.ncplx; ++ci) {
    const double re = sa.cplx[ci][0] * sb.cplx[ci][0] - sa.cplx[ci][1] * sb.cplx[ci][1];
    const double imv = sa.cplx[ci][0] * sb.cplx[ci][1] + sa.cplx[ci][1] * sb.cplx[ci][0];
    sa.cplx[ci][0] = re;
    sa.cplx[ci][1] = imv;
  }
  return im.backward(sa.cplx, sa.real);
}

std::pair<double, double> semigroup_gradient_bound_check(
    const std::vector<Field>& f, double t, const SpectralPlan& plan) {
  if (!(t > 0.0))
    throw std::invalid_argument("semigroup_gradient_bound_check: t must be > 0");
  const Field div = divergence(f, plan);
  const Field evolved = heat_semigroup(div, t, 1.0, 1.0, plan);
  const double lhs = max_abs(evolved);
  double fmax = 0.0;
  for (const auto& c : f) fmax = std::max(fmax, max_abs(c));
  const int n = plan.grid().dim;
  const double rhs = n / std::sqrt(M_PI) / std::sqrt(t) * std::exp(-t) * fmax;
  return {lhs, rhs};
}

}  // namespace chtx
