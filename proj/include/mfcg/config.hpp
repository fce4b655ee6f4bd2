#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfcg/envs.hpp"
#include "mfcg/learner.hpp"
#include "mfcg/rates.hpp"

namespace mfcg {

enum class Benchmark { kAsymptoticLq, kTrader };

/// How greedy controls are pooled over the tail window.
enum class TailStatistic { kMean, kMode };

std::string_view to_string(Benchmark b) noexcept;
std::string_view to_string(TailStatistic s) noexcept;

struct ExperimentConfig {
  Benchmark benchmark = Benchmark::kAsymptoticLq;

  double state_lo = -1.75;
  double state_hi = 2.25;
  double state_step = 0.1;
  double action_lo = -3.0;
  double action_hi = 3.0;
  double action_step = 0.1;

  double dt = 0.01;
  double horizon = 20.0;  // time units
  double sigma = 0.5;
  double beta = 1.0;  // discount rate, asymptotic benchmark only

  InitialDist initial = GaussianInit{0.0, 0.5};
  bool initial_uniform = false;

  LqCostParams lq;
  TraderCostParams trader;

  RateExponents rates;
  double epsilon = 0.01;
  bool snapshot_q = false;
  StopRule stop;  // max_episodes mirrors `episodes`

  std::uint64_t episodes = 1;
  std::uint64_t runs = 1;
  std::uint64_t tail_window = 1;
  std::uint64_t base_seed = 0;
  std::string output_dir = "out";
  bool force_misspecified_rates = false;

  double support_threshold = 0.01;
  TailStatistic tail_statistic = TailStatistic::kMean;
  double quad_step = 1e-4;

  Grid state_grid() const { return Grid::from_bounds(state_lo, state_hi, state_step); }
  Grid action_grid() const { return Grid::from_bounds(action_lo, action_hi, action_step); }
  std::size_t horizon_steps() const;
  double discount_gamma() const;
  EnvSpec env_spec() const;
  LearnerParams learner_params() const;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  /// Every setting as (section.key, value) in a fixed order.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

/// Parses flat `key = value` lines grouped under `[section]` headers.
/// `#` starts a comment. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Formats with 9 significant digits.
std::string format_number(double v);

}  // namespace mfcg
