#include <cmath>
#include <fstream>

#include "mfcg/experiment.hpp"

namespace mfcg {

double weighted_control_rmse(std::span<const double> learned, std::span<const double> theory,
                             std::span<const double> theory_mass, double support_threshold) {
  if (learned.size() != theory.size() || theory.size() != theory_mass.size()) {
    throw DimensionError("control comparison needs matching grids");
  }
  double weight = 0.0;
  double acc = 0.0;
  for (std::size_t x = 0; x < learned.size(); ++x) {
    if (theory_mass[x] < support_threshold) continue;
    const double d = learned[x] - theory[x];
    weight += theory_mass[x];
    acc += theory_mass[x] * d * d;
  }
  if (!(weight > 0.0)) throw DimensionError("support threshold excludes every state");
  return std::sqrt(acc / weight);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("TV distance needs equal lengths");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

ComparisonReport compare_to_theory(const std::vector<LearnedSlice>& learned, const std::vector<TheorySlice>& theory,
                                   const Grid& state_grid, double support_threshold) {
  if (learned.size() != theory.size() || learned.empty()) throw DimensionError("learned and theory slices differ");
  ComparisonReport rep;
  auto grid_mean = [&](const std::vector<double>& p) {
    double m = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) m += p[x] * state_grid.point(x);
    return m;
  };
  for (std::size_t i = 0; i < learned.size(); ++i) {
    const auto& l = learned[i];
    const auto& th = theory[i];
    if (l.control.size() != state_grid.size() || th.control.size() != state_grid.size()) {
      throw DimensionError("slice does not match the state grid");
    }
    SliceReport s;
    s.time = th.time;
    s.weighted_control_rmse = weighted_control_rmse(l.control, th.control, th.distribution, support_threshold);
    s.mean_gap = std::abs(grid_mean(l.mu_global) - th.mean);
    s.mean_gap_local = std::abs(grid_mean(l.mu_local) - th.mean);
    s.tv_distance_global_theory = tv_distance(l.mu_global, th.distribution);
    s.tv_distance_local_theory = tv_distance(l.mu_local, th.distribution);
    s.tv_distance_global_local = tv_distance(l.mu_global, l.mu_local);
    rep.per_time.push_back(s);
  }
  const double n = static_cast<double>(rep.per_time.size());
  for (const auto& s : rep.per_time) {
    rep.weighted_control_rmse += s.weighted_control_rmse / n;
    rep.mean_gap += s.mean_gap / n;
    rep.mean_gap_local += s.mean_gap_local / n;
    rep.tv_distance_global_theory += s.tv_distance_global_theory / n;
    rep.tv_distance_local_theory += s.tv_distance_local_theory / n;
    rep.tv_distance_global_local += s.tv_distance_global_local / n;
  }
  return rep;
}

namespace {

// Opened in binary mode so rows end in a bare LF on every platform.
std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void close_csv(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("I/O error while writing " + path.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

std::vector<std::filesystem::path> emit_csv(const ExperimentResult& result, const std::vector<TheorySlice>& theory,
                                            const ComparisonReport& report, const std::filesystem::path& out_dir,
                                            const std::string& timestamp) {
  const auto& cfg = result.config;
  const Grid grid = cfg.state_grid();
  const bool finite = cfg.benchmark == Benchmark::kTrader;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;

  {
    const auto path = out_dir / "control.csv";
    auto out = open_csv(path);
    out << (finite ? "t,x,alpha_learned,alpha_theory\n" : "x,alpha_learned,alpha_theory\n");
    for (std::size_t i = 0; i < result.averaged.size(); ++i) {
      for (std::size_t x = 0; x < grid.size(); ++x) {
        if (finite) out << format_number(theory[i].time) << ',';
        out << format_number(grid.point(x)) << ',' << format_number(result.averaged[i].control[x]) << ','
            << format_number(theory[i].control[x]) << '\n';
      }
    }
    close_csv(out, path);
    written.push_back(path);
  }
  {
    const auto path = out_dir / "distributions.csv";
    auto out = open_csv(path);
    out << "t,x,mu_global_learned,mu_local_learned,mu_theory\n";
    for (std::size_t i = 0; i < result.averaged.size(); ++i) {
      const auto& s = result.averaged[i];
      for (std::size_t x = 0; x < grid.size(); ++x) {
        out << format_number(theory[i].time) << ',' << format_number(grid.point(x)) << ','
            << format_number(s.mu_global[x]) << ',' << format_number(s.mu_local[x]) << ','
            << format_number(theory[i].distribution[x]) << '\n';
      }
    }
    close_csv(out, path);
    written.push_back(path);
  }
  {
    const auto path = out_dir / "report.csv";
    auto out = open_csv(path);
    out << "metric,value\n";
    auto row = [&](const std::string& name, double v) { out << name << ',' << format_number(v) << '\n'; };
    row("weighted_control_rmse", report.weighted_control_rmse);
    row("mean_gap", report.mean_gap);
    row("mean_gap_local", report.mean_gap_local);
    row("tv_distance_global_theory", report.tv_distance_global_theory);
    row("tv_distance_local_theory", report.tv_distance_local_theory);
    row("tv_distance_global_local", report.tv_distance_global_local);
    if (finite) {
      for (const auto& s : report.per_time) {
        const std::string tag = "[t=" + format_number(s.time) + "]";
        row("weighted_control_rmse" + tag, s.weighted_control_rmse);
        row("mean_gap" + tag, s.mean_gap);
        row("mean_gap_local" + tag, s.mean_gap_local);
        row("tv_distance_global_theory" + tag, s.tv_distance_global_theory);
        row("tv_distance_local_theory" + tag, s.tv_distance_local_theory);
        row("tv_distance_global_local" + tag, s.tv_distance_global_local);
      }
    }
    close_csv(out, path);
    written.push_back(path);
  }
  {
    const auto path = out_dir / "meta.csv";
    auto out = open_csv(path);
    out << "key,value\n";
    for (const auto& [k, v] : cfg.resolved()) out << k << ',' << csv_field(v) << '\n';
    for (const auto& run : result.runs) {
      out << "run.seed," << run.seed << '\n';
    }
    for (const auto& run : result.runs) {
      out << "run.episodes_run," << run.episodes_run << '\n';
    }
    out << "timestamp," << csv_field(timestamp) << '\n';
    close_csv(out, path);
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> emit_theory_csv(const ExperimentConfig& cfg, const std::vector<TheorySlice>& theory,
                                                   const std::filesystem::path& out_dir) {
  const Grid grid = cfg.state_grid();
  const bool finite = cfg.benchmark == Benchmark::kTrader;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  const auto control_path = out_dir / "theory_control.csv";
  auto control = open_csv(control_path);
  control << (finite ? "t,x,alpha_theory\n" : "x,alpha_theory\n");
  const auto dist_path = out_dir / "theory_distributions.csv";
  auto dist = open_csv(dist_path);
  dist << "t,x,mu_theory\n";
  for (const auto& s : theory) {
    for (std::size_t x = 0; x < grid.size(); ++x) {
      if (finite) control << format_number(s.time) << ',';
      control << format_number(grid.point(x)) << ',' << format_number(s.control[x]) << '\n';
      dist << format_number(s.time) << ',' << format_number(grid.point(x)) << ',' << format_number(s.distribution[x])
           << '\n';
    }
  }
  close_csv(control, control_path);
  close_csv(dist, dist_path);
  return {control_path, dist_path};
}

}  // namespace mfcg
