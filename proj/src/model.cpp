#include "chtx/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chtx {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Consumption: return "consumption";
    case Variant::ParabolicProduction: return "parabolic_production";
    case Variant::EllipticProduction: return "elliptic_production";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "consumption") return Variant::Consumption;
  if (s == "parabolic_production") return Variant::ParabolicProduction;
  if (s == "elliptic_production") return Variant::EllipticProduction;
  throw std::invalid_argument("unknown model variant: " + s);
}

namespace {
void check_common(double a, double b) {
  if (!(a >= 0.0)) throw std::invalid_argument("ModelSpec: a must be >= 0");
  // b = 0 is admitted so the minimal-model control experiments are
  // constructible; the theorem checks in thresholds require b > 0.
  if (!(b >= 0.0)) throw std::invalid_argument("ModelSpec: b must be >= 0");
}
}  // namespace

ModelSpec ModelSpec::consumption(double chi, double a, double b, double tau) {
  check_common(a, b);
  if (!(tau > 0.0)) throw std::invalid_argument("ModelSpec: tau must be > 0");
  ModelSpec m;
  m.variant_ = Variant::Consumption;
  m.chi_ = chi;
  m.a_ = a;
  m.b_ = b;
  m.tau_ = tau;
  return m;
}

ModelSpec ModelSpec::parabolic_production(double chi, double a, double b,
                                          double lambda, double mu, double tau) {
  check_common(a, b);
  if (!(tau > 0.0)) throw std::invalid_argument("ModelSpec: tau must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("ModelSpec: lambda must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("ModelSpec: mu must be > 0");
  ModelSpec m;
  m.variant_ = Variant::ParabolicProduction;
  m.chi_ = chi;
  m.a_ = a;
  m.b_ = b;
  m.lambda_ = lambda;
  m.mu_ = mu;
  m.tau_ = tau;
  return m;
}

ModelSpec ModelSpec::elliptic_production(double chi, double a, double b,
                                         double lambda, double mu) {
  check_common(a, b);
  if (!(lambda > 0.0)) throw std::invalid_argument("ModelSpec: lambda must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("ModelSpec: mu must be > 0");
  ModelSpec m;
  m.variant_ = Variant::EllipticProduction;
  m.chi_ = chi;
  m.a_ = a;
  m.b_ = b;
  m.lambda_ = lambda;
  m.mu_ = mu;
  return m;
}

double ModelSpec::lambda() const {
  if (!has_lambda())
    throw std::logic_error("ModelSpec: lambda not applicable to " + to_string(variant_));
  return lambda_;
}

double ModelSpec::mu() const {
  if (!has_mu())
    throw std::logic_error("ModelSpec: mu not applicable to " + to_string(variant_));
  return mu_;
}

double ModelSpec::tau() const {
  if (!has_tau())
    throw std::logic_error("ModelSpec: tau not applicable to " + to_string(variant_));
  return tau_;
}

Grid Grid::make(int dim, double half_width, int points_per_dim,
                std::size_t cell_cap) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2, or 3");
  if (!(half_width > 0.0)) throw std::invalid_argument("Grid: half_width must be > 0");
  const int n = points_per_dim;
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Grid: points_per_dim must be a power of two >= 8");
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    if (total > cell_cap / static_cast<std::size_t>(n))
      throw std::invalid_argument("Grid: total point count exceeds the configured cap");
    total *= static_cast<std::size_t>(n);
  }
  Grid g;
  g.dim = dim;
  g.half_width = half_width;
  g.points_per_dim = n;
  g.spacing = 2.0 * half_width / n;
  return g;
}

std::size_t Grid::total() const {
  std::size_t t = 1;
  for (int d = 0; d < dim; ++d) t *= static_cast<std::size_t>(points_per_dim);
  return t;
}

std::array<int, 3> Grid::unravel(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  const auto n = static_cast<std::size_t>(points_per_dim);
  for (int d = dim - 1; d >= 0; --d) {
    out[d] = static_cast<int>(idx % n);
    idx /= n;
  }
  return out;
}

std::array<double, 3> Grid::point(std::size_t idx) const {
  const auto iv = unravel(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) x[d] = coordinate(iv[d]);
  return x;
}

Field Field::sample(const Grid& g,
                    const std::function<double(const std::array<double, 3>&)>& f) {
  Field out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = f(g.point(i));
  return out;
}

double max_value(const Field& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : f.values) m = std::max(m, x);
  return m;
}

double min_value(const Field& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : f.values) m = std::min(m, x);
  return m;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double x : f.values) m = std::max(m, std::abs(x));
  return m;
}

bool has_non_finite(const Field& f) {
  for (double x : f.values)
    if (!std::isfinite(x)) return true;
  return false;
}

double box_integral(const Field& f) {
  double s = 0.0;
  for (double x : f.values) s += x;
  double hn = 1.0;
  for (int d = 0; d < f.grid.dim; ++d) hn *= f.grid.spacing;
  return hn * s;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

double positivity_violation(const State& s, double tol) {
  (void)tol;
  const double scale_u = std::max(1.0, max_value(s.u));
  const double scale_v = std::max(1.0, max_value(s.v));
  const double vu = std::max(0.0, -min_value(s.u)) / scale_u;
  const double vv = std::max(0.0, -min_value(s.v)) / scale_v;
  return std::max(vu, vv);
}

Field rhs_u(const State& state, const ModelSpec& model,
            const std::vector<Field>& grad_v, const Field& lap_u,
            const Field& div_u_grad_v) {
  if (state.blown_up) throw std::logic_error("rhs_u: state is flagged blown-up");
  require_same_grid(state.u, lap_u, "rhs_u");
  require_same_grid(state.u, div_u_grad_v, "rhs_u");
  for (const auto& g : grad_v) require_same_grid(state.u, g, "rhs_u");
  const double chi = model.chi(), a = model.a(), b = model.b();
  Field out(state.u.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = state.u[i];
    out[i] = lap_u[i] - chi * div_u_grad_v[i] + u * (a - b * u);
  }
  return out;
}

Field rhs_v(const State& state, const ModelSpec& model, const Field& lap_v) {
  if (model.variant() == Variant::EllipticProduction)
    throw std::logic_error("rhs_v: elliptic signal equation has no time derivative");
  require_same_grid(state.v, lap_v, "rhs_v");
  const double tau = model.tau();
  Field out(state.v.grid);
  if (model.variant() == Variant::Consumption) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = (lap_v[i] - state.u[i] * state.v[i]) / tau;
  } else {
    const double lambda = model.lambda(), mu = model.mu();
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = (lap_v[i] - lambda * state.v[i] + mu * state.u[i]) / tau;
  }
  return out;
}

}  // namespace chtx
