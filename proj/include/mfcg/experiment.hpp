#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfcg/config.hpp"

namespace mfcg {

/// Learned quantities at one reported time: the control per state and the
/// global/local state distributions. Infinite-horizon runs report a single
/// slice (time T); finite-horizon runs report t = 0..T-1.
struct LearnedSlice {
  double time = 0.0;
  std::vector<double> control;
  std::vector<double> mu_global;
  std::vector<double> mu_local;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::uint64_t episodes_run = 0;
  std::vector<LearnedSlice> slices;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  /// Mean over runs of the per-run tail averages.
  std::vector<LearnedSlice> averaged;
};

/// Executes `runs` independent learners with seeds base_seed + r and
/// tail-averages each over its last `tail_window` episodes. Runs execute
/// concurrently; results do not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Tail average of a single learner run.
RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed);

/// Closed-form counterpart of LearnedSlice.
struct TheorySlice {
  double time = 0.0;
  std::vector<double> control;
  std::vector<double> distribution;
  double mean = 0.0;
};

std::vector<TheorySlice> theory_for(const ExperimentConfig& cfg);

struct SliceReport {
  double time = 0.0;
  double weighted_control_rmse = 0.0;
  double mean_gap = 0.0;
  double mean_gap_local = 0.0;
  double tv_distance_global_theory = 0.0;
  double tv_distance_local_theory = 0.0;
  double tv_distance_global_local = 0.0;
};

/// Headline metrics are the per-slice metrics averaged over slices.
struct ComparisonReport {
  double weighted_control_rmse = 0.0;
  double mean_gap = 0.0;
  double mean_gap_local = 0.0;
  double tv_distance_global_theory = 0.0;
  double tv_distance_local_theory = 0.0;
  double tv_distance_global_local = 0.0;
  std::vector<SliceReport> per_time;
};

/// sqrt(sum_x w(x) (learned(x) - theory(x))^2) with w the theoretical mass
/// restricted to {x : mass >= support_threshold} and renormalized there.
double weighted_control_rmse(std::span<const double> learned, std::span<const double> theory,
                             std::span<const double> theory_mass, double support_threshold);

/// Half the L1 distance.
double tv_distance(std::span<const double> p, std::span<const double> q);

ComparisonReport compare_to_theory(const std::vector<LearnedSlice>& learned, const std::vector<TheorySlice>& theory,
                                   const Grid& state_grid, double support_threshold);

/// Writes control.csv, distributions.csv, report.csv and meta.csv into
/// out_dir (created if needed). Returns the paths written.
std::vector<std::filesystem::path> emit_csv(const ExperimentResult& result, const std::vector<TheorySlice>& theory,
                                            const ComparisonReport& report, const std::filesystem::path& out_dir,
                                            const std::string& timestamp);

/// Theory-only outputs of `solve`: theory_control.csv and theory_distributions.csv.
std::vector<std::filesystem::path> emit_theory_csv(const ExperimentConfig& cfg, const std::vector<TheorySlice>& theory,
                                                   const std::filesystem::path& out_dir);

}  // namespace mfcg
