// Command-line front end: run experiments, print closed-form solutions and
// tabulate the Riccati limit gap.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfcg/analytic.hpp"
#include "mfcg/config.hpp"
#include "mfcg/errors.hpp"
#include "mfcg/experiment.hpp"

namespace {

using mfcg::format_number;

std::filesystem::path resolve_out(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("MFCG_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return from_config;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> episodes, runs, seed;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  auto cfg = mfcg::load_config(a.config);
  if (a.episodes) {
    cfg.episodes = *a.episodes;
    cfg.stop.max_episodes = *a.episodes;
    if (cfg.tail_window > cfg.episodes) cfg.tail_window = cfg.episodes;
  }
  if (a.runs) cfg.runs = *a.runs;
  if (a.seed) cfg.base_seed = *a.seed;
  const auto out_dir = resolve_out(a.out, cfg.output_dir);
  cfg.output_dir = out_dir.string();
  cfg.validate();

  const auto result = mfcg::run_experiment(cfg);
  const auto theory = mfcg::theory_for(cfg);
  const auto report = mfcg::compare_to_theory(result.averaged, theory, cfg.state_grid(), cfg.support_threshold);
  for (const auto& p : mfcg::emit_csv(result, theory, report, out_dir, utc_timestamp())) {
    std::cout << "wrote " << p.string() << '\n';
  }
  std::cout << "weighted_control_rmse " << format_number(report.weighted_control_rmse) << '\n'
            << "mean_gap " << format_number(report.mean_gap) << '\n'
            << "tv_distance_global_theory " << format_number(report.tv_distance_global_theory) << '\n'
            << "tv_distance_local_theory " << format_number(report.tv_distance_local_theory) << '\n'
            << "tv_distance_global_local " << format_number(report.tv_distance_global_local) << '\n';
  return 0;
}

int cmd_solve(const std::string& benchmark, const std::string& config, const std::string& out) {
  auto cfg = mfcg::load_config(config);
  const auto wanted = benchmark == "trader" ? mfcg::Benchmark::kTrader : mfcg::Benchmark::kAsymptoticLq;
  if (cfg.benchmark != wanted) {
    throw mfcg::ConfigError("experiment.benchmark", "config describes " + std::string(mfcg::to_string(cfg.benchmark)));
  }
  if (wanted == mfcg::Benchmark::kAsymptoticLq) {
    const auto sol = mfcg::solve_asymptotic_lq(cfg.lq, cfg.beta, cfg.sigma);
    std::cout << "gamma2 " << format_number(sol.gamma2) << '\n'
              << "gamma1 " << format_number(sol.gamma1) << '\n'
              << "gamma0 " << format_number(sol.gamma0) << '\n'
              << "m_hat " << format_number(sol.m_hat) << '\n'
              << "limit_var " << format_number(sol.limit_var) << '\n';
  } else {
    const auto& init = std::get<mfcg::GaussianInit>(cfg.initial);
    const auto sol = mfcg::solve_trader(cfg.trader, cfg.horizon, cfg.sigma, init.mean, init.std, cfg.quad_step);
    std::cout << "delta_plus " << format_number(sol.delta_plus()) << '\n'
              << "delta_minus " << format_number(sol.delta_minus()) << '\n'
              << "eta(0) " << format_number(sol.eta(0.0)) << '\n'
              << "eta_bar(0) " << format_number(sol.eta_bar(0.0)) << '\n'
              << "mean_x(T) " << format_number(sol.mean_x(cfg.horizon)) << '\n'
              << "var_x(T) " << format_number(sol.var_x(cfg.horizon)) << '\n';
  }
  const auto theory = mfcg::theory_for(cfg);
  for (const auto& p : mfcg::emit_theory_csv(cfg, theory, resolve_out(out, cfg.output_dir))) {
    std::cout << "wrote " << p.string() << '\n';
  }
  return 0;
}

int cmd_riccati(double c1, double c2, double horizon, const std::vector<long>& groups, double mesh_step,
                const std::string& out) {
  const auto gaps = mfcg::riccati_limit_gap(c1, c2, horizon, mesh_step, groups);
  std::string table = "M,sup_zeta,sup_phi_gap,gronwall_bound\n";
  for (const auto& g : gaps) {
    table += std::to_string(g.groups) + ',' + format_number(g.sup_zeta) + ',' + format_number(g.sup_phi_gap) + ',' +
             format_number(g.gronwall_bound) + '\n';
  }
  std::cout << table;
  const char* env = std::getenv("MFCG_OUT_DIR");
  if (!out.empty() || (env != nullptr && *env != '\0')) {
    const auto dir = resolve_out(out, "");
    std::filesystem::create_directories(dir);
    const auto path = dir / "riccati_gap.csv";
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << table;
    if (!f) throw mfcg::Error("cannot write " + path.string());
    std::cout << "wrote " << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field control and game Q-learning"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "train learners and compare with the closed-form solution");
  run->add_option("--config", run_args.config, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--episodes", run_args.episodes, "override experiment.episodes")->check(CLI::PositiveNumber);
  run->add_option("--runs", run_args.runs, "override experiment.runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "override experiment.seed");
  run->add_option("--out", run_args.out, "output directory");

  std::string benchmark, solve_config, solve_out;
  auto* solve = app.add_subcommand("solve", "print closed-form coefficients and write theory CSVs");
  solve->add_option("--benchmark", benchmark, "asymptotic_lq or trader")
      ->required()
      ->check(CLI::IsMember({"asymptotic_lq", "trader"}));
  solve->add_option("--config", solve_config, "config file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", solve_out, "output directory");

  double c1 = 0.0, c2 = 0.0, horizon = 0.0, mesh_step = 1e-4;
  std::vector<long> groups;
  std::string riccati_out;
  auto* riccati = app.add_subcommand("riccati-limit", "gap between finite-group and limit Riccati coefficients");
  riccati->add_option("--c1", c1)->required();
  riccati->add_option("--c2", c2)->required();
  riccati->add_option("--T", horizon)->required()->check(CLI::PositiveNumber);
  riccati->add_option("--M", groups, "comma-separated group counts")->required()->delimiter(',')->check(
      CLI::PositiveNumber);
  riccati->add_option("--mesh-step", mesh_step)->check(CLI::PositiveNumber);
  riccati->add_option("--out", riccati_out, "also write riccati_gap.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*solve) return cmd_solve(benchmark, solve_config, solve_out);
    return cmd_riccati(c1, c2, horizon, groups, mesh_step, riccati_out);
  } catch (const mfcg::ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
