#include "chtx/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "chtx/io.hpp"
#include "chtx/weights.hpp"

namespace chtx {

using nlohmann::json;

Field build_initial(const InitialSpec& spec, const Grid& grid, unsigned seed) {
  switch (spec.kind) {
    case InitialSpec::Kind::Constant:
      return Field(grid, spec.value);
    case InitialSpec::Kind::Gaussian:
      return Field::sample(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
          const double dx = x[d] - spec.center[d];
          r2 += dx * dx;
        }
        return spec.background +
               spec.amplitude * std::exp(-r2 / (spec.width * spec.width));
      });
    case InitialSpec::Kind::Cosine: {
      const double k = spec.mode * M_PI / grid.half_width;
      return Field::sample(grid, [&](const std::array<double, 3>& x) {
        return spec.base + spec.amp * std::cos(k * x[0]);
      });
    }
    case InitialSpec::Kind::RandomSmooth: {
      // Nonnegative band-limited sample: random phases on the lowest modes,
      // normalized so the oscillation cannot drive the field negative.
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
      std::uniform_real_distribution<double> coef(0.25, 1.0);
      struct Wave {
        double c, ph;
        int mode, axis;
      };
      std::vector<Wave> waves;
      double csum = 0.0;
      for (int axis = 0; axis < grid.dim; ++axis)
        for (int m = 1; m <= spec.modes; ++m) {
          Wave w{coef(rng), phase(rng), m, axis};
          csum += w.c;
          waves.push_back(w);
        }
      return Field::sample(grid, [&](const std::array<double, 3>& x) {
        double s = 0.0;
        for (const auto& w : waves)
          s += w.c * std::cos(w.mode * M_PI / grid.half_width * x[w.axis] + w.ph);
        // s / csum lies in [-1, 1]; keep the sample within
        // background + [0, amplitude].
        return spec.background + spec.amplitude * 0.5 * (1.0 + s / csum);
      });
    }
  }
  throw std::logic_error("build_initial: unknown kind");
}

std::optional<double> analytic_sup(const InitialSpec& spec) {
  switch (spec.kind) {
    case InitialSpec::Kind::Constant:
      return spec.value;
    case InitialSpec::Kind::Gaussian:
      return spec.background + std::max(0.0, spec.amplitude);
    case InitialSpec::Kind::Cosine:
      return spec.base + std::abs(spec.amp);
    case InitialSpec::Kind::RandomSmooth:
      return spec.background + spec.amplitude;
  }
  return std::nullopt;
}

void scale_initial_sup(InitialSpec& spec, double target) {
  const auto cur = analytic_sup(spec);
  if (!cur || !(*cur > 0.0))
    throw std::invalid_argument("scale_initial_sup: current sup must be positive");
  const double s = target / *cur;
  spec.value *= s;
  spec.amplitude *= s;
  spec.background *= s;
  spec.base *= s;
  spec.amp *= s;
}

ModelSpec ExperimentConfig::model() const {
  switch (variant) {
    case Variant::Consumption:
      return ModelSpec::consumption(chi, a, b, tau);
    case Variant::ParabolicProduction:
      return ModelSpec::parabolic_production(chi, a, b, lambda, mu, tau);
    case Variant::EllipticProduction:
      return ModelSpec::elliptic_production(chi, a, b, lambda, mu);
  }
  throw std::logic_error("ExperimentConfig: unknown variant");
}

Grid ExperimentConfig::make_grid() const { return Grid::make(dim, half_width, points); }

namespace {

const char* kind_name(InitialSpec::Kind k) {
  switch (k) {
    case InitialSpec::Kind::Constant: return "constant";
    case InitialSpec::Kind::Gaussian: return "gaussian";
    case InitialSpec::Kind::Cosine: return "cosine";
    case InitialSpec::Kind::RandomSmooth: return "random_smooth";
  }
  return "?";
}

InitialSpec::Kind kind_from_name(const std::string& s) {
  if (s == "constant") return InitialSpec::Kind::Constant;
  if (s == "gaussian") return InitialSpec::Kind::Gaussian;
  if (s == "cosine") return InitialSpec::Kind::Cosine;
  if (s == "random_smooth") return InitialSpec::Kind::RandomSmooth;
  throw std::invalid_argument("unknown initial kind: " + s);
}

json initial_to_json(const InitialSpec& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  switch (s.kind) {
    case InitialSpec::Kind::Constant:
      j["value"] = s.value;
      break;
    case InitialSpec::Kind::Gaussian:
      j["amplitude"] = s.amplitude;
      j["width"] = s.width;
      j["center"] = s.center;
      j["background"] = s.background;
      break;
    case InitialSpec::Kind::Cosine:
      j["base"] = s.base;
      j["amp"] = s.amp;
      j["mode"] = s.mode;
      break;
    case InitialSpec::Kind::RandomSmooth:
      j["amplitude"] = s.amplitude;
      j["background"] = s.background;
      j["modes"] = s.modes;
      break;
  }
  return j;
}

InitialSpec initial_from_json(const json& j) {
  InitialSpec s;
  s.kind = kind_from_name(j.at("kind").get<std::string>());
  switch (s.kind) {
    case InitialSpec::Kind::Constant:
      s.value = j.at("value").get<double>();
      break;
    case InitialSpec::Kind::Gaussian:
      s.amplitude = j.at("amplitude").get<double>();
      s.width = j.at("width").get<double>();
      if (j.contains("center")) {
        auto c = j.at("center").get<std::vector<double>>();
        for (std::size_t d = 0; d < c.size() && d < 3; ++d) s.center[d] = c[d];
      }
      s.background = j.value("background", 0.0);
      break;
    case InitialSpec::Kind::Cosine:
      s.base = j.at("base").get<double>();
      s.amp = j.at("amp").get<double>();
      s.mode = j.value("mode", 1);
      break;
    case InitialSpec::Kind::RandomSmooth:
      s.amplitude = j.at("amplitude").get<double>();
      s.background = j.value("background", 0.0);
      s.modes = j.value("modes", 3);
      break;
  }
  return s;
}

void reject_inapplicable(const json& m, Variant v) {
  auto forbid = [&](const char* key) {
    if (m.contains(key))
      throw std::invalid_argument(std::string("model.") + key +
                                  " does not apply to variant " + to_string(v));
  };
  if (v == Variant::Consumption) {
    forbid("lambda");
    forbid("mu");
  }
  if (v == Variant::EllipticProduction) forbid("tau");
}

}  // namespace

std::string to_json(const ExperimentConfig& cfg) {
  json j;
  json m;
  m["variant"] = to_string(cfg.variant);
  m["chi"] = cfg.chi;
  m["a"] = cfg.a;
  m["b"] = cfg.b;
  if (cfg.variant != Variant::Consumption) {
    m["lambda"] = cfg.lambda;
    m["mu"] = cfg.mu;
  }
  if (cfg.variant != Variant::EllipticProduction) m["tau"] = cfg.tau;
  j["model"] = m;
  j["grid"] = {{"dim", cfg.dim},
               {"half_width", cfg.half_width},
               {"points_per_dim", cfg.points}};
  j["solver"] = {{"dt", cfg.solver.dt},
                 {"t_end", cfg.solver.t_end},
                 {"safety", cfg.solver.safety},
                 {"blowup_sup_factor", cfg.solver.blowup_sup_factor},
                 {"blowup_abs", cfg.solver.blowup_abs},
                 {"scheme", to_string(cfg.solver.scheme)},
                 {"snapshot_every", cfg.solver.snapshot_every}};
  j["initial"] = {{"u", initial_to_json(cfg.initial_u)},
                  {"v", initial_to_json(cfg.initial_v)}};
  json d;
  d["p"] = cfg.p_list;
  d["kappa1"] = cfg.kappa1;
  d["lyapunov"] = cfg.lyapunov;
  d["lyapunov_p"] = cfg.lyapunov_p;
  j["diagnostics"] = d;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  return j.dump(2);
}

ExperimentConfig experiment_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  const json& m = j.at("model");
  cfg.variant = variant_from_string(m.at("variant").get<std::string>());
  reject_inapplicable(m, cfg.variant);
  cfg.chi = m.at("chi").get<double>();
  cfg.a = m.at("a").get<double>();
  cfg.b = m.at("b").get<double>();
  if (cfg.variant != Variant::Consumption) {
    cfg.lambda = m.at("lambda").get<double>();
    cfg.mu = m.at("mu").get<double>();
  }
  if (cfg.variant != Variant::EllipticProduction) cfg.tau = m.at("tau").get<double>();

  const json& g = j.at("grid");
  cfg.dim = g.at("dim").get<int>();
  cfg.half_width = g.at("half_width").get<double>();
  cfg.points = g.at("points_per_dim").get<int>();

  const json& s = j.at("solver");
  cfg.solver.dt = s.at("dt").get<double>();
  cfg.solver.t_end = s.at("t_end").get<double>();
  cfg.solver.safety = s.value("safety", 0.5);
  cfg.solver.blowup_sup_factor = s.value("blowup_sup_factor", 1e6);
  cfg.solver.blowup_abs = s.value("blowup_abs", 1e12);
  cfg.solver.scheme = scheme_from_string(s.value("scheme", std::string("imex2")));
  cfg.solver.snapshot_every = s.value("snapshot_every", 10);

  cfg.initial_u = initial_from_json(j.at("initial").at("u"));
  if (j.at("initial").contains("v"))
    cfg.initial_v = initial_from_json(j.at("initial").at("v"));

  if (j.contains("diagnostics")) {
    const json& d = j.at("diagnostics");
    if (d.contains("p")) cfg.p_list = d.at("p").get<std::vector<double>>();
    cfg.kappa1 = d.value("kappa1", 0.0);
    cfg.lyapunov = d.value("lyapunov", false);
    cfg.lyapunov_p = d.value("lyapunov_p", 0.0);
  }
  cfg.seed = j.value("seed", 0u);
  cfg.output_dir = j.value("output_dir", std::string("out"));
  return cfg;
}

DiagnosticsConfig make_diagnostics(const ExperimentConfig& cfg, const Grid& grid,
                                   const Field& v0) {
  DiagnosticsConfig d;
  d.p_list = cfg.p_list;
  const double p0 = cfg.p_list.empty() ? 2.0 : cfg.p_list.front();
  const double kappa1 =
      cfg.kappa1 > 0.0 ? cfg.kappa1 : default_kappa1(cfg.chi, p0);
  d.psi = make_psi(WeightSpec::make(kappa1, grid.dim), grid);
  if (cfg.lyapunov) {
    if (cfg.variant != Variant::Consumption)
      throw std::invalid_argument("diagnostics: lyapunov requires the consumption model");
    const double p =
        cfg.lyapunov_p > 0.0 ? cfg.lyapunov_p : default_p(grid.dim);
    const double sup_v0 = std::max(0.0, max_value(v0));
    d.lyap = make_lyapunov_spec(cfg.model(), grid.dim, p, sup_v0, d.psi, kappa1);
  }
  return d;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
  const Grid grid = cfg.make_grid();
  const ModelSpec model = cfg.model();
  SpectralPlan plan(grid);

  State init;
  init.t = 0.0;
  init.u = build_initial(cfg.initial_u, grid, cfg.seed);
  init.v = build_initial(cfg.initial_v, grid, cfg.seed + 1);

  DiagnosticsConfig diag = make_diagnostics(cfg, grid, init.v);

  RunOutcome out = run(init, model, cfg.solver, plan, &diag);
  if (diag.lyap) out.trace.lyapunov_bound = lyapunov_bound(init, *diag.lyap);

  if (write_outputs) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_trace(out.trace, dir / "trace.csv");
    write_snapshot(out.final.u, dir / "u_final.chtx");
    write_snapshot(out.final.v, dir / "v_final.chtx");
    std::ofstream echo(dir / "config.json");
    echo << to_json(cfg) << "\n";
    write_plot_script(dir / "plot.py", {"trace.csv"});
  }
  return out;
}

std::string to_json(const SweepConfig& cfg) {
  json j;
  j["base"] = json::parse(to_json(cfg.base));
  json axes = json::array();
  for (const auto& ax : cfg.axes)
    axes.push_back({{"param", ax.param}, {"values", ax.values}});
  j["axes"] = axes;
  j["parallelism"] = cfg.parallelism;
  j["cap"] = cfg.cap;
  return j.dump(2);
}

SweepConfig sweep_from_json(const std::string& text) {
  const json j = json::parse(text);
  SweepConfig cfg;
  cfg.base = experiment_from_json(j.at("base").dump());
  for (const auto& ax : j.at("axes")) {
    SweepAxis a;
    a.param = ax.at("param").get<std::string>();
    a.values = ax.at("values").get<std::vector<double>>();
    cfg.axes.push_back(a);
  }
  cfg.parallelism = j.value("parallelism", 1);
  cfg.cap = j.value("cap", std::size_t{256});
  return cfg;
}

namespace {

void apply_param(ExperimentConfig& cfg, const std::string& name, double value) {
  if (name == "chi") {
    cfg.chi = value;
  } else if (name == "b") {
    cfg.b = value;
  } else if (name == "mu") {
    cfg.mu = value;
  } else if (name == "tau") {
    cfg.tau = value;
  } else if (name == "sup_v0") {
    scale_initial_sup(cfg.initial_v, value);
  } else {
    throw std::invalid_argument("sweep: unknown axis parameter " + name);
  }
}

int thread_cap() {
  if (const char* env = std::getenv("CHTX_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::numeric_limits<int>::max();
}

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& cfg, bool write_outputs) {
  if (cfg.axes.empty() || cfg.axes.size() > 2)
    throw std::invalid_argument("sweep: need 1 or 2 axes");
  for (const auto& ax : cfg.axes)
    if (ax.values.empty()) throw std::invalid_argument("sweep: empty axis");

  std::size_t cells = 1;
  for (const auto& ax : cfg.axes) cells *= ax.values.size();
  if (cells > cfg.cap) throw std::invalid_argument("sweep: cell count exceeds cap");

  std::vector<std::vector<double>> points(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    std::vector<double> vals;
    if (cfg.axes.size() == 1) {
      vals = {cfg.axes[0].values[i]};
    } else {
      const std::size_t inner = cfg.axes[1].values.size();
      vals = {cfg.axes[0].values[i / inner], cfg.axes[1].values[i % inner]};
    }
    points[i] = vals;
  }

  std::vector<SweepRow> rows(cells);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells || failed.load()) return;
      try {
        ExperimentConfig cell = cfg.base;
        for (std::size_t a = 0; a < cfg.axes.size(); ++a)
          apply_param(cell, cfg.axes[a].param, points[i][a]);
        cell.output_dir =
            (std::filesystem::path(cfg.base.output_dir) / ("cell_" + std::to_string(i)))
                .string();
        const RunOutcome out = run_experiment(cell, write_outputs);

        SweepRow row;
        row.axis_values = points[i];
        const Field v0 = build_initial(cell.initial_v, cell.make_grid(), cell.seed + 1);
        row.report = check_conditions(cell.model(), cell.dim,
                                      std::max(0.0, max_value(v0)));
        row.classified = out.classified;
        row.t_stop = out.t_stop;
        if (!out.trace.local_lp.empty())
          for (double x : out.trace.local_lp.front())
            row.max_local_lp = std::max(row.max_local_lp, x);
        row.plateau = !out.trace.local_lp.empty() &&
                      out.classified == RunClass::CompletedBounded &&
                      plateaued(out.trace.local_lp.front());
        rows[i] = std::move(row);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  const int nthreads =
      std::max(1, std::min({cfg.parallelism, static_cast<int>(cells), thread_cap()}));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("sweep: cell failed: " + first_error);
  return rows;
}

void write_sweep_summary(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  for (const auto& ax : cfg.axes) out << ax.param << ",";
  out << "thm12_ok,thm13_ok,thm14_ok,rmk15_ok,classified,t_stop,max_local_lp,plateau\n";
  out.precision(17);
  for (const auto& r : rows) {
    for (double v : r.axis_values) out << v << ",";
    out << r.report.thm12_ok << "," << r.report.thm13_ok << "," << r.report.thm14_ok
        << "," << r.report.rmk15_ok << "," << to_string(r.classified) << ","
        << r.t_stop << "," << r.max_local_lp << "," << r.plateau << "\n";
  }
}

}  // namespace chtx
