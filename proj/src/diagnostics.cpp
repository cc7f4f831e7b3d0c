#include "chtx/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace chtx {

double default_kappa1(double chi, double p, double eps) {
  const double c = std::abs(chi);
  if (c == 0.0) return 1.0;
  const double f1 = c * (p / (p + 1.0) + (p - 1.0) / (p + 1.0));
  const double f2 = c * (1.0 / (p + 1.0) + (p - 1.0) / (p * (p + 1.0)));
  double kappa = 1.0;
  while (kappa * std::max(f1, f2) >= eps && kappa > 1e-12) kappa *= 0.5;
  return kappa;
}

LyapunovSpec make_lyapunov_spec(const ModelSpec& model, int n, double p,
                                double sup_v0, const Field& psi, double kappa1,
                                double eps, double eps_prime) {
  if (model.variant() != Variant::Consumption)
    throw std::invalid_argument("lyapunov: consumption model only");
  if (!(eps > 0.0 && eps < 1.0) || !(eps_prime > 0.0 && eps_prime < 1.0))
    throw std::invalid_argument("lyapunov: eps and eps' must lie in (0,1)");
  LyapunovSpec spec;
  spec.p = p;
  spec.sigma = sigma_coefficients(model, n, p, sup_v0);
  spec.psi = psi;
  spec.eps = eps;
  spec.eps_prime = eps_prime;
  spec.kappa1 = kappa1;
  spec.b = model.b();
  spec.sup_v0 = sup_v0;

  const double chi = model.chi(), a = model.a(), tau = model.tau();
  const double k2 = kappa1 * kappa1;
  auto m_at = [&](double v) {
    const double w = chi - 2.0 * spec.sigma.sigma * v / (tau * p);
    return a + k2 / (4.0 * eps * (p - 1.0)) + w * w * k2 / (4.0 * eps_prime);
  };
  // (chi - 2 sigma v/(tau p))^2 is convex in v, so the max sits at an endpoint.
  spec.M = std::max(m_at(0.0), m_at(sup_v0));

  const double int_psi = box_integral(psi);
  if (!(int_psi > 0.0)) throw std::invalid_argument("lyapunov: int psi must be > 0");
  spec.K_p =
      std::pow(std::exp(spec.sigma.sigma * sup_v0 * sup_v0) * int_psi, -1.0 / p);
  return spec;
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
  }
  throw std::invalid_argument("unit_ball_volume: n must be 1, 2, or 3");
}

namespace {

// Sampled sharp indicator of the unit ball about the origin: 1 inside,
// 1/2 within h/2 of the shell, 0 outside.
Field ball_indicator(const Grid& g) {
  const double h = g.spacing;
  return Field::sample(g, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    const double r = std::sqrt(r2);
    if (std::abs(r - 1.0) <= h / 2.0) return 0.5;
    return r < 1.0 ? 1.0 : 0.0;
  });
}

Field power_field(const Field& u, double p) {
  const double scale = std::max(1.0, max_value(u));
  if (min_value(u) < -kPositivityTol * scale)
    throw std::runtime_error("local_lp_sup: u negative beyond the positivity slack");
  Field up(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i)
    up[i] = std::pow(std::max(0.0, u[i]), p);
  return up;
}

}  // namespace

Field local_lp_field(const Field& u, double p, const SpectralPlan& plan) {
  if (!(p >= 1.0)) throw std::invalid_argument("local_lp_sup: p must be >= 1");
  const Grid& g = u.grid;
  if (!(g == plan.grid()))
    throw std::invalid_argument("local_lp_sup: field grid does not match plan");
  if (g.half_width < 2.0)
    throw std::invalid_argument("local_lp_sup: half_width must be >= 2");
  if (g.spacing > 0.5)
    throw std::invalid_argument("local_lp_sup: ball under-resolved (h > 0.5)");

  const Field up = power_field(u, p);
  const Field ind = ball_indicator(g);

  // Periodic convolution (u^p * ind) via the spectral product; the indicator
  // is even so convolution and correlation coincide. Quadrature weight h^n.
  Field c = spectral_convolve(up, ind, plan);
  double hn = 1.0;
  for (int d = 0; d < g.dim; ++d) hn *= g.spacing;
  for (auto& x : c.values) x *= hn;
  return c;
}

double local_lp_sup(const Field& u, double p, const SpectralPlan& plan) {
  return max_value(local_lp_field(u, p, plan));
}

double lyapunov(const State& state, const LyapunovSpec& spec) {
  require_same_grid(state.u, spec.psi, "lyapunov");
  const double tol = 1e-8 + kPositivityTol;
  const double vmax = max_value(state.v);
  const double vmin = min_value(state.v);
  if (vmin < -tol || vmax > spec.sup_v0 * (1.0 + 1e-8) + tol)
    throw std::runtime_error(
        "lyapunov: v escaped [0, sup_v0]; comparison principle violated");
  const double scale = std::max(1.0, max_value(state.u));
  if (min_value(state.u) < -kPositivityTol * scale)
    throw std::runtime_error("lyapunov: u negative beyond the positivity slack");
  double s = 0.0;
  const double sig = spec.sigma.sigma;
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    const double ui = std::max(0.0, state.u[i]);
    const double vi = state.v[i];
    s += std::pow(ui, spec.p) * std::exp(sig * vi * vi) * spec.psi[i];
  }
  double hn = 1.0;
  for (int d = 0; d < state.u.grid.dim; ++d) hn *= state.u.grid.spacing;
  return hn * s;
}

double lyapunov_bound(const State& initial, const LyapunovSpec& spec) {
  const double l0 = lyapunov(initial, spec);
  const double ode = std::pow(spec.M / (spec.b * spec.K_p), spec.p);
  return std::max(l0, ode);
}

void record(const State& state, DiagnosticsTrace& trace,
            const DiagnosticsConfig& cfg, const SpectralPlan& plan) {
  if (trace.blown_up_at) return;
  if (state.blown_up) {
    trace.blown_up_at = state.t;
    return;
  }
  if (!trace.times.empty() && state.t <= trace.times.back())
    throw std::logic_error("record: times must be strictly increasing");
  if (trace.p_list.empty()) {
    trace.p_list = cfg.p_list;
    trace.local_lp.assign(cfg.p_list.size(), {});
  }
  trace.times.push_back(state.t);
  trace.sup_u.push_back(max_value(state.u));
  trace.sup_v.push_back(max_value(state.v));
  const auto gv = gradient(state.v, plan);
  double gmax = 0.0;
  for (std::size_t i = 0; i < state.v.size(); ++i) {
    double g2 = 0.0;
    for (const auto& comp : gv) g2 += comp[i] * comp[i];
    gmax = std::max(gmax, g2);
  }
  trace.sup_grad_v.push_back(std::sqrt(gmax));
  for (std::size_t pi = 0; pi < cfg.p_list.size(); ++pi)
    trace.local_lp[pi].push_back(local_lp_sup(state.u, cfg.p_list[pi], plan));
  const double p0 = cfg.p_list.front();
  trace.weighted_energy.push_back(weighted_lp(state.u, cfg.psi, p0));
  trace.lyapunov.push_back(cfg.lyap ? lyapunov(state, *cfg.lyap) : 0.0);
}

bool plateaued(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 8) return true;
  double mid_max = 0.0, last_max = 0.0;
  for (std::size_t i = n / 4; i < 3 * n / 4; ++i) mid_max = std::max(mid_max, series[i]);
  for (std::size_t i = 3 * n / 4; i < n; ++i) last_max = std::max(last_max, series[i]);
  return last_max <= 2.0 * mid_max;
}

}  // namespace chtx
