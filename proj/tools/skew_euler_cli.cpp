// Command-line front end: verify, run, sweep, converge, operator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "skew_euler/skew_euler.hpp"

namespace se = skew_euler;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitVerification = 4;

/// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw se::Error("cannot open " + path + " for writing");
  fn(os);
}

int cmd_verify(std::uint64_t seed, const std::string& out) {
  const auto results = se::run_verify(seed);
  emit(out, [&](std::ostream& os) { se::write_verify_report(os, results); });
  int failures = 0;
  for (const auto& r : results)
    if (!r.passed()) {
      std::cerr << "FAIL," << r.name << '\n';
      ++failures;
    }
  return failures ? kExitVerification : kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  se::RunConfig cfg = se::parse_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream echo(fs::path(cfg.output_dir) / "config.echo.ini");
    se::dump_config(echo, cfg);
  }
  const se::Scheme<> scheme(se::to_scheme_config(cfg));
  const se::RunRecord rec = scheme.run(se::initial_field(cfg));
  {
    std::ofstream os(fs::path(cfg.output_dir) / "run.csv");
    se::write_run_csv(os, rec);
  }
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", k);
    se::write_field_csv((fs::path(cfg.output_dir) / name).string(), cfg.grid,
                        rec.snapshots[k].second);
  }
  std::cout << "steps=" << rec.steps << " dt=" << se::format_double(rec.dt)
            << " samples=" << rec.samples.size() << " snapshots=" << rec.snapshots.size()
            << " output=" << cfg.output_dir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-conserving split-form solver for the 2D compressible Euler equations"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Run the algebraic and discrete identity suites");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--out", verify_out, "Report file (default stdout)");

  std::string config_path, run_out;
  auto* run = app.add_subcommand("run", "Integrate a configured case and write diagnostics");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", run_out, "Output directory (overrides output.dir)");

  double gamma = 1.4, alpha2 = 1.0, mn_min = 0.0, mn_max = 2.0;
  std::size_t steps = 100;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Boundary eigenvalues versus normal Mach number");
  sweep->add_option("--gamma", gamma, "Ratio of specific heats")->required();
  sweep->add_option("--alpha2", alpha2, "Norm weight alpha^2");
  sweep->add_option("--mn-min", mn_min, "Smallest Mn")->required();
  sweep->add_option("--mn-max", mn_max, "Largest Mn")->required();
  sweep->add_option("--steps", steps, "Number of intervals")->required();
  sweep->add_option("--out", sweep_out, "CSV file (default stdout)");

  std::string conv_config, conv_out;
  int levels = 3;
  auto* conv = app.add_subcommand("converge", "Manufactured-solution grid refinement study");
  conv->add_option("--config", conv_config, "Config file")->required();
  conv->add_option("--levels", levels, "Number of grid levels (>= 2)");
  conv->add_option("--out", conv_out, "CSV file (default stdout)");

  int op_order = 4;
  std::size_t op_n = 16;
  double op_h = 0.0;
  std::string op_topo = "bounded", op_out;
  auto* op = app.add_subcommand("operator", "Dump a 1D SBP operator (weights and Q rows)");
  op->add_option("--order", op_order, "Interior order (2 or 4)");
  op->add_option("--n", op_n, "Number of nodes");
  op->add_option("--spacing", op_h, "Spacing (default 1/(n-1) bounded, 1/n periodic)");
  op->add_option("--topology", op_topo, "bounded or periodic");
  op->add_option("--out", op_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*verify) return cmd_verify(seed, verify_out);
    if (*run) return cmd_run(config_path, run_out);
    if (*sweep) {
      const se::GasModel g{gamma, alpha2};
      g.validate();
      const auto rows = se::sweep_eigenvalues(g, mn_min, mn_max, steps);
      emit(sweep_out, [&](std::ostream& os) { se::write_sweep_csv(os, rows); });
      return kExitOk;
    }
    if (*conv) {
      const auto rows = se::converge(se::parse_config(conv_config), levels);
      emit(conv_out, [&](std::ostream& os) { se::write_convergence_csv(os, rows); });
      return kExitOk;
    }
    if (*op) {
      if (op_topo != "bounded" && op_topo != "periodic")
        throw se::ConfigError("--topology must be bounded or periodic", 0);
      const auto topo = op_topo == "periodic" ? se::Topology::periodic : se::Topology::bounded;
      if (op_h <= 0.0)
        op_h = 1.0 / static_cast<double>(topo == se::Topology::periodic ? op_n : op_n - 1);
      const auto sbp = se::build_sbp(op_order, op_n, op_h, topo);
      emit(op_out, [&](std::ostream& os) { se::write_operator_csv(os, sbp); });
      return kExitOk;
    }
  } catch (const se::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const se::VacuumError& e) {
    std::cerr << "vacuum: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const se::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
