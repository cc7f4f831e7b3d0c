#include "chtx/selfcheck.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "chtx/model.hpp"
#include "chtx/operators.hpp"
#include "chtx/thresholds.hpp"
#include "chtx/weights.hpp"

namespace chtx {

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail << msg;
    }
  }
};

Field random_band_limited(const Grid& g, std::mt19937_64& rng, int max_mode,
                          double amplitude = 1.0) {
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
    double s = 0.0;
    for (const auto& w : waves)
      s += w.c * std::cos(w.mode * M_PI / g.half_width * x[w.axis] + w.ph);
    return amplitude * s;
  });
}

CheckResult check_threshold_identities() {
  Checker c;
  for (int n = 2; n <= 12; ++n)
    for (double chi : {-1.0, 1.0, 3.0}) {
      const double got = dstar(1.0, n, chi);
      const double want = std::sqrt(2.0 / n);
      std::ostringstream msg;
      msg << "dstar(1," << n << "," << chi << ") = " << got << " != sqrt(2/n)";
      c.require(std::abs(got - want) <= 1e-12, msg.str());
    }
  const double d22 = dstar(2.0, 2, 1.0);
  c.require(std::abs(d22 - 1.0) <= 1e-12, "dstar(2,2,chi>0) != 1");
  return {"threshold identities (D*)", c.ok, c.detail.str()};
}

CheckResult check_appendix_formula() {
  Checker c;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> gdist(2.05, 12.0);
  std::uniform_int_distribution<int> ndist(1, 3);
  std::uniform_real_distribution<double> cdist(0.5, 4.0);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    const double gamma = gdist(rng);
    const int n = ndist(rng);
    const double C = cdist(rng);
    const double got = cgamma_bound(gamma, n, C);
    const double want = std::pow(C, gamma) * std::pow(gamma - 2.0, 1.0 - gamma) *
                        std::pow(2.0, 9.0 * n * (gamma - 2.0));
    std::ostringstream msg;
    msg << "cgamma_bound(" << gamma << "," << n << "," << C << ") = " << got
        << " vs " << want;
    c.require(std::abs(got - want) <= 1e-12 * std::abs(want), msg.str());
  }
  for (int n = 1; n <= 4 && c.ok; ++n) {
    const auto grid = default_gamma_grid(n);
    const double c1 = cstar_lower(n, 1.0, grid);
    const double c2 = cstar_lower(n, 2.0, grid);
    c.require(c1 == 2.0 * c2, "cstar_lower does not halve exactly when C doubles");
  }
  return {"appendix constant formula (C_gamma,n)", c.ok, c.detail.str()};
}

CheckResult check_sigma_construction() {
  Checker c;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int accepted = 0;
  while (accepted < 100 && c.ok) {
    const double tau = std::exp(std::log(0.05) + u01(rng) * std::log(5.0 / 0.05));
    const double chi = (u01(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 2.8 * u01(rng));
    const double p = 1.1 + 4.9 * u01(rng);
    const ModelSpec model = ModelSpec::consumption(chi, 1.0, 1.0, tau);
    // Fill in sup_v0 below the admissible threshold for this p, then the
    // quadratic inequality must hold on all of [0, sup_v0].
    SigmaCoefficients probe = sigma_coefficients(model, 1, p, 0.0);
    const double sup_v0 = 0.95 * u01(rng) * probe.threshold / std::abs(chi);
    const SigmaCoefficients s = sigma_coefficients(model, 1, p, sup_v0);
    if (!s.condition_ok) continue;
    ++accepted;
    for (int k = 0; k < 200; ++k) {
      const double v = sup_v0 * k / 199.0;
      const double lhs = s.A * s.sigma * s.sigma * v * v + s.B;
      const double rhs = s.Ccoef * s.sigma + s.D * s.sigma * v;
      std::ostringstream msg;
      msg << "quadratic inequality fails at tau=" << tau << " chi=" << chi
          << " p=" << p << " v=" << v;
      c.require(lhs < rhs, msg.str());
      if (!c.ok) break;
    }
  }
  for (int i = 0; i < 100 && c.ok; ++i) {
    const double chi = (u01(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 2.8 * u01(rng));
    const double p = 1.1 + 4.9 * u01(rng);
    const ModelSpec model = ModelSpec::consumption(chi, 1.0, 1.0, 1.0);
    const SigmaCoefficients s = sigma_coefficients(model, 1, p, 0.1);
    const double closed = p * (p - 1.0) * chi * chi / 4.0;
    std::ostringstream msg;
    msg << "tau=1 closed form: sigma=" << s.sigma << " vs " << closed;
    c.require(std::abs(s.sigma - closed) <= 1e-12 * closed, msg.str());
  }
  return {"sigma construction (Lyapunov exponent)", c.ok, c.detail.str()};
}

CheckResult check_weight_lemma() {
  Checker c;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  const double margin = 1.0 - 1e-12;
  for (int n = 1; n <= 3 && c.ok; ++n)
    for (double kappa1 : {0.1, 0.5, 2.0}) {
      const WeightSpec spec = WeightSpec::make(kappa1, n);
      for (int i = 0; i < 10000; ++i) {
        std::array<double, 3> x{0, 0, 0};
        for (int d = 0; d < n; ++d) x[d] = coord(rng);
        const double psi = psi_value(spec, x);
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
        const double decay = std::exp(-spec.kappa2 * std::sqrt(r2));
        const auto g = psi_gradient(spec, x);
        double gnorm = 0.0;
        for (int d = 0; d < n; ++d) gnorm += g[d] * g[d];
        gnorm = std::sqrt(gnorm);
        const double lap = std::abs(psi_laplacian(spec, x));
        std::ostringstream msg;
        msg << "weight bound fails at n=" << n << " kappa1=" << kappa1;
        c.require(psi > 0.0 && psi <= decay * margin && gnorm <= kappa1 * psi * margin &&
                      lap <= kappa1 * psi * margin,
                  msg.str());
        if (!c.ok) break;
      }
      if (!c.ok) break;
    }
  return {"weight lemma bounds (psi)", c.ok, c.detail.str()};
}

CheckResult check_operator_symbols() {
  Checker c;
  {
    const Grid g = Grid::make(1, M_PI, 64);
    SpectralPlan plan(g);
    const Field cos3 = Field::sample(
        g, [&](const std::array<double, 3>& x) { return std::cos(3.0 * x[0]); });
    const Field lap = laplacian(cos3, plan);
    double err = 0.0;
    for (std::size_t i = 0; i < lap.size(); ++i)
      err = std::max(err, std::abs(lap[i] + 9.0 * cos3[i]));
    c.require(err <= 1e-8, "laplacian plane-wave symbol off");

    const Field heat_c = heat_semigroup(Field(g, 2.0), 0.7, 1.0, 1.0, plan);
    c.require(std::abs(max_value(heat_c) - 2.0 * std::exp(-0.7)) <= 1e-8 &&
                  std::abs(min_value(heat_c) - 2.0 * std::exp(-0.7)) <= 1e-8,
              "shifted semigroup constant-mode decay off");

    const Field heat_cos = heat_semigroup(cos3, 0.3, 0.0, 1.0, plan);
    err = 0.0;
    for (std::size_t i = 0; i < heat_cos.size(); ++i)
      err = std::max(err, std::abs(heat_cos[i] - std::exp(-9.0 * 0.3) * cos3[i]));
    c.require(err <= 1e-8, "heat semigroup plane-wave symbol off");

    const double lambda = 0.8, mu = 1.7;
    const Field res = elliptic_resolve(cos3, lambda, mu, plan);
    err = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i)
      err = std::max(err, std::abs(res[i] - mu / (lambda + 9.0) * cos3[i]));
    c.require(err <= 1e-8, "elliptic resolvent plane-wave symbol off");
  }
  {
    // Semigroup composition on random band-limited data.
    std::mt19937_64 rng(3);
    const Grid g = Grid::make(1, 5.0, 128);
    SpectralPlan plan(g);
    for (int i = 0; i < 10 && c.ok; ++i) {
      const Field f = random_band_limited(g, rng, 10);
      const Field two = heat_semigroup(heat_semigroup(f, 0.2, 1.0, 1.0, plan), 0.35,
                                       1.0, 1.0, plan);
      const Field one = heat_semigroup(f, 0.55, 1.0, 1.0, plan);
      double err = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k)
        err = std::max(err, std::abs(two[k] - one[k]));
      c.require(err <= 1e-11, "semigroup composition off");
    }
  }
  {
    // Gradient-semigroup estimate, randomized.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> tdist(0.01, 5.0);
    for (int n = 1; n <= 2 && c.ok; ++n) {
      const Grid g = Grid::make(n, 5.0, n == 1 ? 128 : 64);
      SpectralPlan plan(g);
      for (int i = 0; i < 250 && c.ok; ++i) {
        std::vector<Field> f;
        for (int d = 0; d < n; ++d) f.push_back(random_band_limited(g, rng, 8));
        const double t = tdist(rng);
        const auto [lhs, rhs] = semigroup_gradient_bound_check(f, t, plan);
        std::ostringstream msg;
        msg << "gradient-semigroup bound violated: lhs=" << lhs << " rhs=" << rhs
            << " t=" << t << " n=" << n;
        c.require(lhs <= rhs * (1.0 + 1e-6), msg.str());
      }
    }
  }
  return {"spectral operator symbols", c.ok, c.detail.str()};
}

}  // namespace

std::vector<CheckResult> run_selfchecks() {
  return {check_threshold_identities(), check_appendix_formula(),
          check_sigma_construction(), check_weight_lemma(),
          check_operator_symbols()};
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace chtx
