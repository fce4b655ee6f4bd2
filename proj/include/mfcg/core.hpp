#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mfcg/errors.hpp"

namespace mfcg {

/// Uniform 1-D lattice lo, lo+step, ..., lo+(count-1)*step.
class Grid {
 public:
  Grid(double lo, double step, std::size_t count);

  /// Builds the lattice covering [lo, hi]; hi must sit on the lattice.
  static Grid from_bounds(double lo, double hi, double step);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return lo_ + static_cast<double>(count_ - 1) * step_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return count_; }
  double point(std::size_t i) const noexcept { return lo_ + static_cast<double>(i) * step_; }

  std::vector<double> points() const;

  /// Nearest lattice index. Out-of-range values clamp to the ends and exact
  /// midpoints go to the lower index.
  std::size_t project(double value) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double lo_;
  double step_;
  std::size_t count_;
};

inline std::size_t project_to_grid(double value, const Grid& grid) noexcept {
  return grid.project(value);
}

/// Probability vector over a grid or over state-action pairs.
class SimplexVector {
 public:
  static constexpr double kTolerance = 1e-9;

  /// Takes ownership of `mass`; throws DimensionError if it is not on the simplex.
  explicit SimplexVector(std::vector<double> mass);

  static SimplexVector uniform(std::size_t n);
  static SimplexVector one_hot(std::size_t n, std::size_t idx);
  /// Normalizes non-negative weights with a positive total.
  static SimplexVector from_weights(std::vector<double> weights);

  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const noexcept { return mass_[i]; }
  std::span<const double> mass() const noexcept { return mass_; }

  /// In-place version of dirac_mix.
  void mix_toward(std::size_t idx, double rate);

  bool on_simplex(double tol = kTolerance) const noexcept;

 private:
  SimplexVector() = default;
  std::vector<double> mass_;
};

/// dist + rate * (delta_idx - dist).
SimplexVector dirac_mix(const SimplexVector& dist, std::size_t idx, double rate);

double mean_of(const SimplexVector& dist, const Grid& grid);

/// Largest absolute entrywise difference.
double sup_distance(std::span<const double> a, std::span<const double> b);

/// Cost-to-go estimates indexed by (state, action), row-major.
class QTable {
 public:
  QTable(std::size_t states, std::size_t actions, double init = 0.0);

  std::size_t states() const noexcept { return states_; }
  std::size_t actions() const noexcept { return actions_; }

  double operator()(std::size_t s, std::size_t a) const noexcept { return values_[s * actions_ + a]; }
  double& operator()(std::size_t s, std::size_t a) noexcept { return values_[s * actions_ + a]; }

  std::span<const double> row(std::size_t s) const noexcept {
    return {values_.data() + s * actions_, actions_};
  }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t states_;
  std::size_t actions_;
  std::vector<double> values_;
};

/// First index of the smallest entry. Throws DimensionError on an empty row.
std::size_t argmin(std::span<const double> row);

inline std::size_t argmin_row(const QTable& q, std::size_t state) { return argmin(q.row(state)); }

/// Visit counts per (state, action), optionally split by time step.
class VisitCounter {
 public:
  VisitCounter(std::size_t states, std::size_t actions, std::size_t time_steps = 1);

  std::uint64_t count(std::size_t s, std::size_t a, std::size_t t = 0) const noexcept {
    return counts_[index(s, a, t)];
  }
  /// Returns the count before the increment.
  std::uint64_t bump(std::size_t s, std::size_t a, std::size_t t = 0) noexcept {
    return counts_[index(s, a, t)]++;
  }
  std::uint64_t total() const noexcept;

  friend bool operator==(const VisitCounter&, const VisitCounter&) = default;

 private:
  std::size_t index(std::size_t s, std::size_t a, std::size_t t) const noexcept {
    return (t * states_ + s) * actions_ + a;
  }

  std::size_t states_;
  std::size_t actions_;
  std::vector<std::uint64_t> counts_;
};

/// Seeded random stream. The same seed yields the same draws on a given
/// toolchain; every consumer draws through this type.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t draws() const noexcept { return draws_; }

  double uniform() {
    ++draws_;
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  double normal() {
    ++draws_;
    return normal_(engine_);
  }
  std::size_t index(std::size_t n) {
    ++draws_;
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  /// Inverse-CDF draw from a probability vector.
  std::size_t categorical(const SimplexVector& dist);

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mfcg
