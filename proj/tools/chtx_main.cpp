#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "chtx/experiment.hpp"
#include "chtx/io.hpp"
#include "chtx/selfcheck.hpp"
#include "chtx/thresholds.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Maps a byte offset from a JSON parse error to a 1-based line number.
int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

int run_command(const std::string& config_path, const std::string& output_dir) {
  const std::string text = read_file(config_path);
  chtx::ExperimentConfig cfg;
  try {
    cfg = chtx::experiment_from_json(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << config_path << ":" << line_of_offset(text, e.byte)
              << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }
  if (!output_dir.empty()) cfg.output_dir = output_dir;

  const chtx::RunOutcome out = chtx::run_experiment(cfg, true);
  std::cout << "classified: " << chtx::to_string(out.classified) << "\n"
            << "t_stop: " << out.t_stop << "\n"
            << "max sup_u: " << out.max_sup_u << "\n"
            << "outputs: " << cfg.output_dir << "\n";
  return 0;  // a blow-up is a result, not an error
}

int sweep_command(const std::string& config_path) {
  const std::string text = read_file(config_path);
  chtx::SweepConfig cfg;
  try {
    cfg = chtx::sweep_from_json(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << config_path << ":" << line_of_offset(text, e.byte)
              << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }
  const auto rows = chtx::sweep(cfg, true);
  namespace fs = std::filesystem;
  fs::create_directories(cfg.base.output_dir);
  const fs::path summary = fs::path(cfg.base.output_dir) / "summary.csv";
  chtx::write_sweep_summary(cfg, rows, summary);
  chtx::write_plot_script(fs::path(cfg.base.output_dir) / "plot.py", {"summary.csv"});
  std::cout << "cells: " << rows.size() << "\nsummary: " << summary.string() << "\n";
  return 0;
}

int thresholds_command(const std::string& model_name, double tau, int n, double chi,
                       double sup_v0, double a, double b, double lambda, double mu,
                       double abs_const) {
  chtx::ModelSpec model = [&]() {
    const chtx::Variant v = chtx::variant_from_string(model_name);
    switch (v) {
      case chtx::Variant::Consumption:
        return chtx::ModelSpec::consumption(chi, a, b, tau);
      case chtx::Variant::ParabolicProduction:
        return chtx::ModelSpec::parabolic_production(chi, a, b, lambda, mu, tau);
      case chtx::Variant::EllipticProduction:
        return chtx::ModelSpec::elliptic_production(chi, a, b, lambda, mu);
    }
    throw std::invalid_argument("unknown model");
  }();
  const chtx::ThresholdReport r = chtx::check_conditions(model, n, sup_v0, abs_const);
  std::cout << chtx::format_report(r);
  return 0;
}

int validate_command() {
  const auto results = chtx::run_selfchecks();
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass) std::cout << " -- " << r.detail;
    std::cout << "\n";
  }
  return chtx::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chtx: whole-space chemotaxis-logistic simulation laboratory"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a JSON config");
  run_cmd->add_option("--config", config_path, "experiment config file")->required();
  run_cmd->add_option("--output-dir", output_dir, "override output directory");

  std::string sweep_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep from a JSON config");
  sweep_cmd->add_option("--config", sweep_path, "sweep config file")->required();

  std::string model_name = "consumption";
  double tau = 1.0, chi = 1.0, sup_v0 = 0.0, a = 0.0, b = 1.0, lambda = 1.0, mu = 1.0,
         abs_const = 1.0;
  int n = 1;
  auto* thr = app.add_subcommand("thresholds", "evaluate the boundedness conditions");
  thr->add_option("--model", model_name, "consumption|parabolic_production|elliptic_production");
  thr->add_option("--tau", tau);
  thr->add_option("--n", n)->required();
  thr->add_option("--chi", chi)->required();
  thr->add_option("--sup-v0", sup_v0);
  thr->add_option("--a", a);
  thr->add_option("--b", b)->required();
  thr->add_option("--lambda", lambda);
  thr->add_option("--mu", mu);
  thr->add_option("--abs-const", abs_const, "absolute constant of the C_gamma,n bound");

  auto* val = app.add_subcommand("validate", "run the built-in property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_command(config_path, output_dir);
    if (sweep_cmd->parsed()) return sweep_command(sweep_path);
    if (thr->parsed())
      return thresholds_command(model_name, tau, n, chi, sup_v0, a, b, lambda, mu,
                                abs_const);
    if (val->parsed()) return validate_command();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
