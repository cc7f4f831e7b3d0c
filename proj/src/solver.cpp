#include "chtx/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace chtx {

std::string to_string(Scheme s) {
  return s == Scheme::IMEX1 ? "imex1" : "imex2";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "imex1") return Scheme::IMEX1;
  if (s == "imex2") return Scheme::IMEX2;
  throw std::invalid_argument("unknown scheme: " + s);
}

std::string to_string(RunClass c) {
  switch (c) {
    case RunClass::CompletedBounded: return "CompletedBounded";
    case RunClass::BlowUpDetected: return "BlowUpDetected";
    case RunClass::StepCollapse: return "StepCollapse";
  }
  return "?";
}

namespace {

constexpr double kDivGuard = 1e-30;
constexpr double kDtFloor = 1e-12;

struct NonlinearRhs {
  Field nu;
  Field nv;  // unused for the elliptic variant
};

// Explicit part of the dynamics: -chi div(u grad v) + u(a - b u) for u and
// the non-diffusive signal terms for v. The transport term is assembled in
// conservative form (u grad v pointwise, divergence spectrally) so the cell
// mass is conserved exactly when a = b = 0.
NonlinearRhs nonlinear_rhs(const Field& u, const Field& v, const ModelSpec& model,
                           const SpectralPlan& plan) {
  const double chi = model.chi(), a = model.a(), b = model.b();
  NonlinearRhs out;
  out.nu = Field(u.grid);
  if (chi != 0.0) {
    auto gv = gradient(v, plan);
    for (auto& comp : gv)
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= u[i];
    const Field div = divergence(gv, plan);
    for (std::size_t i = 0; i < u.size(); ++i)
      out.nu[i] = -chi * div[i] + u[i] * (a - b * u[i]);
  } else {
    for (std::size_t i = 0; i < u.size(); ++i)
      out.nu[i] = u[i] * (a - b * u[i]);
  }

  switch (model.variant()) {
    case Variant::Consumption: {
      const double tau = model.tau();
      out.nv = Field(v.grid);
      for (std::size_t i = 0; i < v.size(); ++i) out.nv[i] = -u[i] * v[i] / tau;
      break;
    }
    case Variant::ParabolicProduction: {
      const double tau = model.tau(), mu = model.mu();
      out.nv = Field(v.grid);
      for (std::size_t i = 0; i < v.size(); ++i) out.nv[i] = mu * u[i] / tau;
      break;
    }
    case Variant::EllipticProduction:
      break;  // v carries no dynamics of its own
  }
  return out;
}

void diffuse(Field& u, Field& v, double dt, const ModelSpec& model,
             const SpectralPlan& plan) {
  u = heat_semigroup(u, dt, 0.0, 1.0, plan);
  switch (model.variant()) {
    case Variant::Consumption:
      v = heat_semigroup(v, dt, 0.0, model.tau(), plan);
      break;
    case Variant::ParabolicProduction:
      v = heat_semigroup(v, dt, model.lambda(), model.tau(), plan);
      break;
    case Variant::EllipticProduction:
      break;
  }
}

void heun_substep(Field& u, Field& v, double dt, const ModelSpec& model,
                  const SpectralPlan& plan) {
  const bool elliptic = model.variant() == Variant::EllipticProduction;
  const NonlinearRhs k1 = nonlinear_rhs(u, v, model, plan);
  Field u1(u.grid), v1 = v;
  for (std::size_t i = 0; i < u.size(); ++i) u1[i] = u[i] + dt * k1.nu[i];
  if (!elliptic)
    for (std::size_t i = 0; i < v.size(); ++i) v1[i] = v[i] + dt * k1.nv[i];
  const NonlinearRhs k2 = nonlinear_rhs(u1, v1, model, plan);
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] += 0.5 * dt * (k1.nu[i] + k2.nu[i]);
  if (!elliptic)
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += 0.5 * dt * (k1.nv[i] + k2.nv[i]);
}

double max_grad_norm(const Field& v, const SpectralPlan& plan) {
  const auto gv = gradient(v, plan);
  double gmax = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double g2 = 0.0;
    for (const auto& comp : gv) g2 += comp[i] * comp[i];
    gmax = std::max(gmax, g2);
  }
  return std::sqrt(gmax);
}

double effective_dt(const State& state, const ModelSpec& model,
                    const SolverConfig& cfg, const SpectralPlan& plan) {
  double dt = cfg.dt;
  const double chi = std::abs(model.chi());
  if (chi > 0.0) {
    const double gmax = max_grad_norm(state.v, plan);
    dt = std::min(dt, cfg.safety * state.u.grid.spacing / (chi * gmax + kDivGuard));
  }
  const double umax = std::max(0.0, max_value(state.u));
  dt = std::min(dt, cfg.safety / (model.a() + 2.0 * model.b() * umax + kDivGuard));
  dt = std::min(dt, cfg.t_end - state.t);
  return dt;
}

}  // namespace

State step(const State& state, const ModelSpec& model, const SolverConfig& cfg,
           const SpectralPlan& plan, double* dt_taken) {
  if (state.blown_up) throw std::logic_error("step: state is flagged blown-up");
  const double dt = effective_dt(state, model, cfg, plan);
  if (dt < kDtFloor) {
    if (dt_taken) *dt_taken = 0.0;
    return state;
  }

  State next = state;
  if (cfg.scheme == Scheme::IMEX2) {
    diffuse(next.u, next.v, 0.5 * dt, model, plan);
    heun_substep(next.u, next.v, dt, model, plan);
    diffuse(next.u, next.v, 0.5 * dt, model, plan);
  } else {
    const NonlinearRhs k = nonlinear_rhs(next.u, next.v, model, plan);
    for (std::size_t i = 0; i < next.u.size(); ++i) next.u[i] += dt * k.nu[i];
    if (model.variant() != Variant::EllipticProduction)
      for (std::size_t i = 0; i < next.v.size(); ++i) next.v[i] += dt * k.nv[i];
    diffuse(next.u, next.v, dt, model, plan);
  }
  if (model.variant() == Variant::EllipticProduction)
    next.v = elliptic_resolve(next.u, model.lambda(), model.mu(), plan);

  next.t = state.t + dt;
  if (has_non_finite(next.u) || has_non_finite(next.v)) next.blown_up = true;
  if (dt_taken) *dt_taken = dt;
  return next;
}

RunOutcome run(const State& initial, const ModelSpec& model,
               const SolverConfig& cfg, const SpectralPlan& plan,
               const DiagnosticsConfig* diagnostics) {
  RunOutcome out;
  State state = initial;
  if (model.variant() == Variant::EllipticProduction)
    state.v = elliptic_resolve(state.u, model.lambda(), model.mu(), plan);

  const double initial_sup = std::max(max_value(state.u), kDivGuard);
  out.max_sup_u = max_value(state.u);

  if (diagnostics) record(state, out.trace, *diagnostics, plan);

  long steps = 0;
  const double t_done = cfg.t_end * (1.0 - 1e-12);
  while (state.t < t_done) {
    double dt = 0.0;
    State next = step(state, model, cfg, plan, &dt);
    if (dt == 0.0) {
      out.classified = RunClass::StepCollapse;
      out.final = state;
      out.t_stop = state.t;
      return out;
    }
    state = std::move(next);
    ++steps;

    const double sup_u = max_value(state.u);
    out.max_sup_u = std::max(out.max_sup_u, sup_u);
    if (state.blown_up || sup_u > cfg.blowup_sup_factor * initial_sup ||
        sup_u > cfg.blowup_abs) {
      state.blown_up = true;
      if (diagnostics) record(state, out.trace, *diagnostics, plan);
      out.trace.blown_up_at = state.t;
      out.classified = RunClass::BlowUpDetected;
      out.final = state;
      out.t_stop = state.t;
      return out;
    }

    const double viol = positivity_violation(state);
    out.worst_positivity = std::max(out.worst_positivity, viol);
    if (viol > kPositivityTol) out.positivity_ok = false;

    if (diagnostics &&
        (steps % std::max(1, cfg.snapshot_every) == 0 || state.t >= t_done))
      record(state, out.trace, *diagnostics, plan);
  }
  out.classified = RunClass::CompletedBounded;
  out.final = state;
  out.t_stop = state.t;
  return out;
}

State picard_mild(const State& initial, const ModelSpec& model,
                  const SolverConfig& cfg, const SpectralPlan& plan,
                  int iterations, double horizon, int max_nodes,
                  std::vector<double>* iterate_distances) {
  (void)cfg;
  if (model.variant() == Variant::EllipticProduction)
    throw std::logic_error("picard_mild: elliptic variant has no mild v-equation");
  if (!(horizon > 0.0)) throw std::invalid_argument("picard_mild: horizon must be > 0");
  if (iterations < 0) throw std::invalid_argument("picard_mild: iterations must be >= 0");
  const int m = std::min(std::max(max_nodes, 1), 64);
  const double dt = horizon / m;
  const double tau = model.tau();
  const double chi = model.chi(), a = model.a(), b = model.b();
  const double lambda = model.has_lambda() ? model.lambda() : 0.0;
  const double mu = model.has_mu() ? model.mu() : 0.0;
  const bool consumption = model.variant() == Variant::Consumption;

  // Free evolution under the shifted semigroups T(t) = e^{(lap - I)t} and
  // T(t/tau); the integrands below carry the compensating +u and +v terms.
  std::vector<Field> u_free(m + 1), v_free(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = i * dt;
    u_free[i] = heat_semigroup(initial.u, t, 1.0, 1.0, plan);
    v_free[i] = consumption ? heat_semigroup(initial.v, t, 1.0, tau, plan)
                            : heat_semigroup(initial.v, t, lambda, tau, plan);
  }

  std::vector<Field> u_cur = u_free, v_cur = v_free;

  auto integrand_u = [&](const Field& u, const Field& v) {
    Field f(u.grid);
    if (chi != 0.0) {
      auto gv = gradient(v, plan);
      for (auto& comp : gv)
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= u[i];
      const Field div = divergence(gv, plan);
      for (std::size_t i = 0; i < u.size(); ++i)
        f[i] = -chi * div[i] + u[i] * (1.0 + a - b * u[i]);
    } else {
      for (std::size_t i = 0; i < u.size(); ++i)
        f[i] = u[i] * (1.0 + a - b * u[i]);
    }
    return f;
  };
  auto integrand_v = [&](const Field& u, const Field& v) {
    Field f(v.grid);
    if (consumption) {
      for (std::size_t i = 0; i < v.size(); ++i)
        f[i] = (1.0 - u[i]) * v[i] / tau;
    } else {
      for (std::size_t i = 0; i < v.size(); ++i)
        f[i] = ((1.0 - lambda) * v[i] + mu * u[i]) / tau;
    }
    return f;
  };

  double prev_dist = -1.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Field> fu(m + 1), fv(m + 1);
    for (int i = 0; i <= m; ++i) {
      fu[i] = integrand_u(u_cur[i], v_cur[i]);
      fv[i] = integrand_v(u_cur[i], v_cur[i]);
    }

    std::vector<Field> u_next(m + 1), v_next(m + 1);
    u_next[0] = initial.u;
    v_next[0] = initial.v;
    for (int i = 1; i <= m; ++i) {
      Field su(initial.u.grid), sv(initial.v.grid);
      for (int j = 0; j < i; ++j) {
        // Midpoint rule: T applied at the interval midpoint, integrand as the
        // mean of the nodal values.
        const double lag = (i - j - 0.5) * dt;
        Field gu(initial.u.grid), gv(initial.v.grid);
        for (std::size_t x = 0; x < gu.size(); ++x) {
          gu[x] = 0.5 * (fu[j][x] + fu[j + 1][x]);
          gv[x] = 0.5 * (fv[j][x] + fv[j + 1][x]);
        }
        gu = heat_semigroup(gu, lag, 1.0, 1.0, plan);
        gv = consumption ? heat_semigroup(gv, lag, 1.0, tau, plan)
                         : heat_semigroup(gv, lag, lambda, tau, plan);
        for (std::size_t x = 0; x < su.size(); ++x) {
          su[x] += gu[x];
          sv[x] += gv[x];
        }
      }
      u_next[i] = u_free[i];
      v_next[i] = v_free[i];
      for (std::size_t x = 0; x < su.size(); ++x) {
        u_next[i][x] += dt * su[x];
        v_next[i][x] += dt * sv[x];
      }
    }

    double dist = 0.0;
    for (int i = 0; i <= m; ++i) {
      for (std::size_t x = 0; x < u_next[i].size(); ++x) {
        dist = std::max(dist, std::abs(u_next[i][x] - u_cur[i][x]));
        dist = std::max(dist, std::abs(v_next[i][x] - v_cur[i][x]));
      }
    }
    if (iterate_distances) iterate_distances->push_back(dist);
    if (prev_dist >= 0.0 && dist > 2.0 * prev_dist && dist > 1e-14)
      throw std::runtime_error(
          "picard_mild: iteration diverging; shorten the horizon");
    prev_dist = dist;
    u_cur = std::move(u_next);
    v_cur = std::move(v_next);
  }

  State out;
  out.t = initial.t + horizon;
  out.u = u_cur[m];
  out.v = v_cur[m];
  return out;
}

}  // namespace chtx
