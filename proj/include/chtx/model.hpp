#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace chtx {

/// Which of the three whole-space chemotaxis-logistic systems is being run.
/// All share the cell equation u_t = lap(u) - chi div(u grad v) + u(a - b u);
/// they differ in the signal equation:
///   Consumption:          tau v_t = lap(v) - u v
///   ParabolicProduction:  tau v_t = lap(v) - lambda v + mu u
///   EllipticProduction:   0       = lap(v) - lambda v + mu u
enum class Variant { Consumption, ParabolicProduction, EllipticProduction };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Model parameters. Only the fields meaningful for the chosen variant are
/// readable; accessing an inapplicable one throws std::logic_error.
class ModelSpec {
 public:
  static ModelSpec consumption(double chi, double a, double b, double tau);
  static ModelSpec parabolic_production(double chi, double a, double b,
                                        double lambda, double mu, double tau);
  static ModelSpec elliptic_production(double chi, double a, double b,
                                       double lambda, double mu);

  Variant variant() const { return variant_; }
  double chi() const { return chi_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double lambda() const;  // production variants only
  double mu() const;      // production variants only
  double tau() const;     // parabolic variants only

  bool has_lambda() const { return variant_ != Variant::Consumption; }
  bool has_mu() const { return variant_ != Variant::Consumption; }
  bool has_tau() const { return variant_ != Variant::EllipticProduction; }

 private:
  ModelSpec() = default;
  Variant variant_{};
  double chi_ = 0, a_ = 0, b_ = 0, lambda_ = 0, mu_ = 0, tau_ = 0;
};

/// Uniform periodic tensor grid on the box [-L, L)^dim with N points per
/// dimension. N must be a power of two >= 8 so spectral transforms are cheap.
struct Grid {
  int dim = 1;
  double half_width = 1.0;     // L
  int points_per_dim = 8;     // N
  double spacing = 0.25;      // h = 2L/N, derived

  static Grid make(int dim, double half_width, int points_per_dim,
                   std::size_t cell_cap = std::size_t{1} << 24);

  std::size_t total() const;
  double coordinate(int index) const { return -half_width + index * spacing; }
  /// Decomposes a row-major linear index into per-axis indices.
  std::array<int, 3> unravel(std::size_t idx) const;
  /// Physical coordinates of the grid point at linear index idx.
  std::array<double, 3> point(std::size_t idx) const;

  bool operator==(const Grid&) const = default;
};

/// Real scalar samples on a Grid, row-major over dimensions.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(g.total(), fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  static Field sample(const Grid& g,
                      const std::function<double(const std::array<double, 3>&)>& f);
};

// Field reductions and checks.
double max_value(const Field& f);
double min_value(const Field& f);
double max_abs(const Field& f);
bool has_non_finite(const Field& f);
/// h^dim * sum of samples: the rectangle rule over the periodic box.
double box_integral(const Field& f);
/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* what);

/// Time slice of a run: cell density u and signal v at time t.
struct State {
  double t = 0.0;
  Field u;
  Field v;
  bool blown_up = false;
};

inline constexpr double kPositivityTol = 1e-10;

/// Most negative value of u and v relative to the slack scale
/// max(1, max field value); 0 when both fields are nonnegative.
double positivity_violation(const State& s, double tol = kPositivityTol);

/// Pointwise right-hand side of the cell equation,
///   lap_u - chi * div_u_grad_v + u (a - b u),
/// from precomputed spatial terms. Pure; NaNs in inputs propagate to the
/// returned field so the caller's blow-up check sees them.
Field rhs_u(const State& state, const ModelSpec& model,
            const std::vector<Field>& grad_v, const Field& lap_u,
            const Field& div_u_grad_v);

/// Pointwise right-hand side of the signal equation:
///   (lap_v - u v)/tau            for Consumption
///   (lap_v - lambda v + mu u)/tau for ParabolicProduction.
/// EllipticProduction has no time derivative; calling this for it throws.
Field rhs_v(const State& state, const ModelSpec& model, const Field& lap_v);

}  // namespace chtx
