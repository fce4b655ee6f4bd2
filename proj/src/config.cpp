#include "mfcg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mfcg {

std::string_view to_string(Benchmark b) noexcept {
  return b == Benchmark::kTrader ? "trader" : "asymptotic_lq";
}

std::string_view to_string(TailStatistic s) noexcept { return s == TailStatistic::kMode ? "mode" : "mean"; }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Raw key/value pairs plus bookkeeping of which keys were read.
class KeyValues {
 public:
  explicit KeyValues(std::string_view text) {
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError("", "line " + std::to_string(lineno) + ": malformed section header");
        section = trim(std::string_view(t).substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string path = section.empty() ? key : section + "." + key;
      if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
      if (!values_.emplace(path, trim(std::string_view(t).substr(eq + 1))).second) {
        throw ConfigError(path, "duplicate key");
      }
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& raw(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "missing key");
    used_.insert(key);
    return it->second;
  }

  double real(const std::string& key) {
    const std::string& s = raw(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError(key, "expected a real number, got '" + s + "'");
    }
    return v;
  }

  std::uint64_t integer(const std::string& key) {
    const std::string& s = raw(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(key, "expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  bool boolean(const std::string& key) {
    const std::string& s = raw(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key, "expected true/false, got '" + s + "'");
  }

  template <typename T, typename Get>
  void optional(const std::string& key, T& out, Get get) {
    if (has(key)) out = (this->*get)(key);
  }

  void reject_unused() const {
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) throw ConfigError(k, "unknown key");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

}  // namespace

std::size_t ExperimentConfig::horizon_steps() const {
  const double n = horizon / dt;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError("dynamics.horizon", "horizon must be a positive integer multiple of dt");
  }
  return static_cast<std::size_t>(r);
}

double ExperimentConfig::discount_gamma() const {
  return benchmark == Benchmark::kAsymptoticLq ? std::exp(-beta * dt) : 1.0;
}

EnvSpec ExperimentConfig::env_spec() const {
  return EnvSpec{state_grid(), action_grid(), dt, sigma, horizon_steps(), discount_gamma(),
                 initial_uniform ? InitialDist{SimplexVector::uniform(state_grid().size())} : initial};
}

LearnerParams ExperimentConfig::learner_params() const { return LearnerParams{rates, epsilon, snapshot_q}; }

void ExperimentConfig::validate() const {
  auto check_grid = [](const char* key, double lo, double hi, double step) {
    try {
      (void)Grid::from_bounds(lo, hi, step);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  };
  check_grid("grid.state", state_lo, state_hi, state_step);
  check_grid("grid.action", action_lo, action_hi, action_step);
  if (!(dt > 0.0)) throw ConfigError("dynamics.dt", "must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("dynamics.sigma", "must be non-negative");
  (void)horizon_steps();
  if (benchmark == Benchmark::kAsymptoticLq && !(beta > 0.0)) throw ConfigError("dynamics.beta", "must be positive");
  if (const auto* g = std::get_if<GaussianInit>(&initial); g && !initial_uniform && !(g->std > 0.0)) {
    throw ConfigError("initial.std", "must be positive");
  }
  if (benchmark == Benchmark::kAsymptoticLq) {
    if (!(lq.c1 > 0.0)) throw ConfigError("cost.c1", "must be positive");
    if (!(lq.c1_tilde > 0.0)) throw ConfigError("cost.c1_tilde", "must be positive");
    if (!(lq.c5_tilde > 0.0)) throw ConfigError("cost.c5_tilde", "must be positive");
  } else if (!(trader.c_alpha > 0.0)) {
    throw ConfigError("cost.c_alpha", "must be positive");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("experiment.epsilon", "must lie in [0, 1]");
  if (episodes < 1) throw ConfigError("experiment.episodes", "must be at least 1");
  if (runs < 1) throw ConfigError("experiment.runs", "must be at least 1");
  if (tail_window < 1 || tail_window > episodes) {
    throw ConfigError("experiment.tail_window", "must lie in [1, episodes]");
  }
  if (!(support_threshold >= 0.0 && support_threshold < 1.0)) {
    throw ConfigError("experiment.support_threshold", "must lie in [0, 1)");
  }
  if (!(quad_step > 0.0)) throw ConfigError("analytic.quad_step", "must be positive");
  if (!force_misspecified_rates) {
    const RateCheck check = validate_exponents(rates);
    if (!check.ok) {
      throw ConfigError("rates", "learning-rate ordering violated: " + check.diagnostic() +
                                     " (set experiment.force_misspecified_rates = true to run anyway)");
    }
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [&](const char* k, double v) { out.emplace_back(k, format_number(v)); };
  auto str = [&](const char* k, std::string v) { out.emplace_back(k, std::move(v)); };
  str("experiment.benchmark", std::string(to_string(benchmark)));
  str("experiment.episodes", std::to_string(episodes));
  str("experiment.runs", std::to_string(runs));
  str("experiment.tail_window", std::to_string(tail_window));
  str("experiment.seed", std::to_string(base_seed));
  num("experiment.epsilon", epsilon);
  str("experiment.output_dir", output_dir);
  str("experiment.force_misspecified_rates", force_misspecified_rates ? "true" : "false");
  num("experiment.support_threshold", support_threshold);
  str("experiment.tail_statistic", std::string(to_string(tail_statistic)));
  str("experiment.snapshot_q", snapshot_q ? "true" : "false");
  num("grid.state_lo", state_lo);
  num("grid.state_hi", state_hi);
  num("grid.state_step", state_step);
  num("grid.action_lo", action_lo);
  num("grid.action_hi", action_hi);
  num("grid.action_step", action_step);
  num("dynamics.dt", dt);
  num("dynamics.horizon", horizon);
  num("dynamics.sigma", sigma);
  if (benchmark == Benchmark::kAsymptoticLq) num("dynamics.beta", beta);
  if (initial_uniform) {
    str("initial.distribution", "uniform");
  } else {
    const auto& g = std::get<GaussianInit>(initial);
    str("initial.distribution", "gaussian");
    num("initial.mean", g.mean);
    num("initial.std", g.std);
  }
  num("rates.omega_mu", rates.omega_mu);
  num("rates.omega_q", rates.omega_q);
  num("rates.omega_mu_tilde", rates.omega_mu_tilde);
  if (benchmark == Benchmark::kAsymptoticLq) {
    num("cost.c1", lq.c1);
    num("cost.c2", lq.c2);
    num("cost.c3", lq.c3);
    num("cost.c4", lq.c4);
    num("cost.c1_tilde", lq.c1_tilde);
    num("cost.c2_tilde", lq.c2_tilde);
    num("cost.c5_tilde", lq.c5_tilde);
  } else {
    num("cost.c_alpha", trader.c_alpha);
    num("cost.c_x", trader.c_x);
    num("cost.c_h", trader.c_h);
    num("cost.c_g", trader.c_g);
  }
  auto tol = [&](const char* k, const std::optional<double>& v) { str(k, v ? format_number(*v) : "disabled"); };
  tol("stop.tol_q", stop.tol_q);
  tol("stop.tol_mu", stop.tol_mu);
  tol("stop.tol_mu_tilde", stop.tol_mu_tilde);
  num("analytic.quad_step", quad_step);
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  KeyValues kv(text);
  ExperimentConfig cfg;

  const std::string& bench = kv.raw("experiment.benchmark");
  if (bench == "asymptotic_lq") {
    cfg.benchmark = Benchmark::kAsymptoticLq;
  } else if (bench == "trader") {
    cfg.benchmark = Benchmark::kTrader;
  } else {
    throw ConfigError("experiment.benchmark", "expected asymptotic_lq or trader, got '" + bench + "'");
  }
  const bool lq = cfg.benchmark == Benchmark::kAsymptoticLq;

  cfg.episodes = kv.integer("experiment.episodes");
  cfg.runs = kv.integer("experiment.runs");
  cfg.tail_window = kv.integer("experiment.tail_window");
  cfg.base_seed = kv.integer("experiment.seed");
  cfg.epsilon = kv.real("experiment.epsilon");
  if (kv.has("experiment.output_dir")) cfg.output_dir = kv.raw("experiment.output_dir");
  kv.optional("experiment.force_misspecified_rates", cfg.force_misspecified_rates, &KeyValues::boolean);
  kv.optional("experiment.snapshot_q", cfg.snapshot_q, &KeyValues::boolean);
  kv.optional("experiment.support_threshold", cfg.support_threshold, &KeyValues::real);
  if (kv.has("experiment.tail_statistic")) {
    const std::string& s = kv.raw("experiment.tail_statistic");
    if (s == "mean") {
      cfg.tail_statistic = TailStatistic::kMean;
    } else if (s == "mode") {
      cfg.tail_statistic = TailStatistic::kMode;
    } else {
      throw ConfigError("experiment.tail_statistic", "expected mean or mode, got '" + s + "'");
    }
  }

  cfg.state_lo = kv.real("grid.state_lo");
  cfg.state_hi = kv.real("grid.state_hi");
  cfg.state_step = kv.real("grid.state_step");
  cfg.action_lo = kv.real("grid.action_lo");
  cfg.action_hi = kv.real("grid.action_hi");
  cfg.action_step = kv.real("grid.action_step");

  cfg.dt = kv.real("dynamics.dt");
  cfg.horizon = kv.real("dynamics.horizon");
  cfg.sigma = kv.real("dynamics.sigma");
  if (lq) cfg.beta = kv.real("dynamics.beta");

  const bool need_initial = !lq || kv.has("initial.distribution");
  if (need_initial) {
    const std::string& d = kv.raw("initial.distribution");
    if (d == "uniform") {
      cfg.initial_uniform = true;
    } else if (d == "gaussian") {
      cfg.initial = GaussianInit{kv.real("initial.mean"), kv.real("initial.std")};
    } else {
      throw ConfigError("initial.distribution", "expected gaussian or uniform, got '" + d + "'");
    }
  } else {
    // The infinite-horizon learner starts from uniform distributions.
    cfg.initial_uniform = true;
  }

  cfg.rates.omega_mu = kv.real("rates.omega_mu");
  cfg.rates.omega_q = kv.real("rates.omega_q");
  cfg.rates.omega_mu_tilde = kv.real("rates.omega_mu_tilde");

  if (lq) {
    cfg.lq.c1 = kv.real("cost.c1");
    cfg.lq.c2 = kv.real("cost.c2");
    cfg.lq.c3 = kv.real("cost.c3");
    cfg.lq.c4 = kv.real("cost.c4");
    cfg.lq.c1_tilde = kv.real("cost.c1_tilde");
    cfg.lq.c2_tilde = kv.real("cost.c2_tilde");
    cfg.lq.c5_tilde = kv.real("cost.c5_tilde");
  } else {
    cfg.trader.c_alpha = kv.real("cost.c_alpha");
    cfg.trader.c_x = kv.real("cost.c_x");
    cfg.trader.c_h = kv.real("cost.c_h");
    cfg.trader.c_g = kv.real("cost.c_g");
  }

  auto tol = [&](const char* key, std::optional<double>& out) {
    if (!kv.has(key)) return;
    if (kv.raw(key) == "disabled") return;
    out = kv.real(key);
    if (!(*out >= 0.0)) throw ConfigError(key, "tolerance must be non-negative");
  };
  tol("stop.tol_q", cfg.stop.tol_q);
  tol("stop.tol_mu", cfg.stop.tol_mu);
  tol("stop.tol_mu_tilde", cfg.stop.tol_mu_tilde);
  kv.optional("analytic.quad_step", cfg.quad_step, &KeyValues::real);

  kv.reject_unused();
  cfg.stop.max_episodes = cfg.episodes;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mfcg
