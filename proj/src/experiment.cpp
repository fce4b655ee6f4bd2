#include "mfcg/experiment.hpp"

#include <future>
#include <memory>

#include "mfcg/analytic.hpp"

namespace mfcg {

namespace {

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg) {
  if (cfg.benchmark == Benchmark::kAsymptoticLq) return std::make_unique<LqEnvironment>(cfg.env_spec(), cfg.lq);
  return std::make_unique<TraderEnvironment>(cfg.env_spec(), cfg.trader);
}

// Running sums of greedy controls and distributions over the tail window.
class TailAccumulator {
 public:
  TailAccumulator(const Grid& states, const Grid& actions, std::vector<double> times, TailStatistic stat)
      : states_(states), actions_(actions), stat_(stat) {
    const std::size_t ns = states.size();
    for (double t : times) {
      slices_.push_back(LearnedSlice{t, std::vector<double>(ns, 0.0), std::vector<double>(ns, 0.0),
                                     std::vector<double>(ns, 0.0)});
    }
    if (stat_ == TailStatistic::kMode) votes_.assign(times.size() * ns * actions.size(), 0);
  }

  void add(std::size_t slice, const QTable& q, const SimplexVector& global, const SimplexVector& local) {
    LearnedSlice& s = slices_[slice];
    const std::size_t ns = states_.size();
    for (std::size_t x = 0; x < ns; ++x) {
      const std::size_t a = argmin_row(q, x);
      if (stat_ == TailStatistic::kMode) {
        ++votes_[(slice * ns + x) * actions_.size() + a];
      } else {
        s.control[x] += actions_.point(a);
      }
      s.mu_global[x] += global[x];
      s.mu_local[x] += local[x];
    }
  }

  void finish_episode() { ++count_; }
  std::uint64_t count() const noexcept { return count_; }

  std::vector<LearnedSlice> averages() const {
    std::vector<LearnedSlice> out = slices_;
    const double n = static_cast<double>(count_);
    const std::size_t ns = states_.size();
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t x = 0; x < ns; ++x) {
        if (stat_ == TailStatistic::kMode) {
          const auto first = votes_.begin() + static_cast<std::ptrdiff_t>((i * ns + x) * actions_.size());
          std::size_t best = 0;
          for (std::size_t a = 1; a < actions_.size(); ++a) {
            if (first[static_cast<std::ptrdiff_t>(a)] > first[static_cast<std::ptrdiff_t>(best)]) best = a;
          }
          out[i].control[x] = actions_.point(best);
        } else {
          out[i].control[x] /= n;
        }
        out[i].mu_global[x] /= n;
        out[i].mu_local[x] /= n;
      }
    }
    return out;
  }

 private:
  Grid states_;
  Grid actions_;
  TailStatistic stat_;
  std::vector<LearnedSlice> slices_;
  std::vector<std::uint32_t> votes_;
  std::uint64_t count_ = 0;
};

}  // namespace

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto env = make_environment(cfg);
  const EnvSpec& spec = env->spec();
  const LearnerParams params = cfg.learner_params();
  StopRule rule = cfg.stop;
  rule.max_episodes = cfg.episodes;
  const std::uint64_t tail_start = cfg.episodes - cfg.tail_window;
  RngStream rng(seed);

  RunResult result;
  result.seed = seed;

  if (cfg.benchmark == Benchmark::kAsymptoticLq) {
    TailAccumulator acc(spec.state_grid, spec.action_grid, {cfg.horizon}, cfg.tail_statistic);
    auto record = [&](const InfiniteHorizonState& s) {
      acc.add(0, s.q, s.mu.back(), s.mu_tilde.back());
      acc.finish_episode();
    };
    const auto final_state = train_infinite(*env, params, rule, rng, [&](const InfiniteHorizonState& s) {
      if (s.episode > tail_start) record(s);
    });
    if (acc.count() == 0) record(final_state);  // break rule fired before the tail window
    result.episodes_run = final_state.episode;
    result.slices = acc.averages();
    return result;
  }

  const std::size_t ns = spec.state_grid.size();
  const std::size_t na = spec.action_grid.size();
  std::vector<double> times(spec.horizon_steps);
  for (std::size_t t = 0; t < times.size(); ++t) times[t] = static_cast<double>(t) * spec.dt;
  TailAccumulator acc(spec.state_grid, spec.action_grid, times, cfg.tail_statistic);
  auto record = [&](const FiniteHorizonState& s) {
    for (std::size_t t = 0; t < spec.horizon_steps; ++t) {
      acc.add(t, s.q_by_time[t], state_marginal(s.nu[t], ns, na), state_marginal(s.nu_tilde[t], ns, na));
    }
    acc.finish_episode();
  };
  const auto final_state = train_finite(*env, params, rule, rng, [&](const FiniteHorizonState& s) {
    if (s.episode > tail_start) record(s);
  });
  if (acc.count() == 0) record(final_state);
  result.episodes_run = final_state.episode;
  result.slices = acc.averages();
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult out;
  out.config = cfg;

  std::vector<std::future<RunResult>> jobs;
  jobs.reserve(cfg.runs);
  for (std::uint64_t r = 0; r < cfg.runs; ++r) {
    const std::uint64_t seed = cfg.base_seed + r;
    jobs.push_back(std::async(std::launch::async, [&cfg, seed] { return run_single(cfg, seed); }));
  }
  for (std::uint64_t r = 0; r < cfg.runs; ++r) {
    try {
      out.runs.push_back(jobs[r].get());
    } catch (const std::exception& e) {
      for (std::uint64_t j = r + 1; j < cfg.runs; ++j) jobs[j].wait();
      throw Error("run with seed " + std::to_string(cfg.base_seed + r) + " failed: " + e.what());
    }
  }

  out.averaged = out.runs.front().slices;
  const double n = static_cast<double>(out.runs.size());
  for (std::size_t i = 0; i < out.averaged.size(); ++i) {
    auto& avg = out.averaged[i];
    for (std::size_t x = 0; x < avg.control.size(); ++x) {
      double c = 0.0, g = 0.0, l = 0.0;
      for (const auto& run : out.runs) {
        c += run.slices[i].control[x];
        g += run.slices[i].mu_global[x];
        l += run.slices[i].mu_local[x];
      }
      avg.control[x] = c / n;
      avg.mu_global[x] = g / n;
      avg.mu_local[x] = l / n;
    }
  }
  return out;
}

std::vector<TheorySlice> theory_for(const ExperimentConfig& cfg) {
  const Grid grid = cfg.state_grid();
  std::vector<TheorySlice> out;
  if (cfg.benchmark == Benchmark::kAsymptoticLq) {
    const auto sol = solve_asymptotic_lq(cfg.lq, cfg.beta, cfg.sigma);
    TheorySlice s;
    s.time = cfg.horizon;
    s.mean = sol.m_hat;
    for (std::size_t x = 0; x < grid.size(); ++x) s.control.push_back(sol.control(grid.point(x)));
    const auto dist = asymptotic_theory_distribution(sol, grid);
    s.distribution.assign(dist.mass().begin(), dist.mass().end());
    out.push_back(std::move(s));
    return out;
  }
  if (cfg.initial_uniform) throw ConfigError("initial.distribution", "the trader oracle needs a Gaussian initial law");
  const auto& init = std::get<GaussianInit>(cfg.initial);
  const auto sol = solve_trader(cfg.trader, cfg.horizon, cfg.sigma, init.mean, init.std, cfg.quad_step);
  const std::size_t steps = cfg.horizon_steps();
  for (std::size_t i = 0; i < steps; ++i) {
    TheorySlice s;
    s.time = static_cast<double>(i) * cfg.dt;
    s.mean = sol.mean_x(s.time);
    for (std::size_t x = 0; x < grid.size(); ++x) s.control.push_back(sol.control(s.time, grid.point(x)));
    const auto dist = trader_theory_distribution(sol, s.time, grid);
    s.distribution.assign(dist.mass().begin(), dist.mass().end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mfcg
