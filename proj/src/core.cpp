#include "mfcg/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mfcg {

Grid::Grid(double lo, double step, std::size_t count) : lo_(lo), step_(step), count_(count) {
  if (!std::isfinite(lo) || !std::isfinite(step) || !(step > 0.0)) {
    throw DimensionError("grid step must be positive and finite");
  }
  if (count < 2) throw DimensionError("grid needs at least two points");
}

Grid Grid::from_bounds(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw DimensionError("grid bounds must satisfy lo < hi with step > 0");
  const double span = (hi - lo) / step;
  const double rounded = std::round(span);
  if (std::abs(span - rounded) > 1e-9 * std::max(1.0, std::abs(span))) {
    throw DimensionError("grid upper bound " + std::to_string(hi) + " is not on the lattice");
  }
  return Grid(lo, step, static_cast<std::size_t>(rounded) + 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = point(i);
  return out;
}

std::size_t Grid::project(double value) const noexcept {
  const double pos = (value - lo_) / step_;
  if (!(pos > 0.0)) return 0;  // also catches NaN
  const double idx = std::ceil(pos - 0.5);
  if (idx >= static_cast<double>(count_ - 1)) return count_ - 1;
  return static_cast<std::size_t>(idx);
}

SimplexVector::SimplexVector(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw DimensionError("probability vector must be non-empty");
  if (!on_simplex()) throw DimensionError("vector is not a probability distribution");
}

SimplexVector SimplexVector::uniform(std::size_t n) {
  if (n == 0) throw DimensionError("probability vector must be non-empty");
  SimplexVector v;
  v.mass_.assign(n, 1.0 / static_cast<double>(n));
  return v;
}

SimplexVector SimplexVector::one_hot(std::size_t n, std::size_t idx) {
  if (idx >= n) throw DimensionError("one-hot index out of range");
  SimplexVector v;
  v.mass_.assign(n, 0.0);
  v.mass_[idx] = 1.0;
  return v;
}

SimplexVector SimplexVector::from_weights(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DimensionError("weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw DimensionError("weights sum to zero");
  for (double& w : weights) w /= total;
  SimplexVector v;
  v.mass_ = std::move(weights);
  return v;
}

void SimplexVector::mix_toward(std::size_t idx, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidRateError("mixing rate must lie in [0, 1]");
  if (idx >= mass_.size()) throw DimensionError("dirac index out of range");
  const double keep = 1.0 - rate;
  for (double& m : mass_) m *= keep;
  mass_[idx] += rate;
}

bool SimplexVector::on_simplex(double tol) const noexcept {
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) return false;
    total += m;
  }
  return std::abs(total - 1.0) <= tol;
}

SimplexVector dirac_mix(const SimplexVector& dist, std::size_t idx, double rate) {
  SimplexVector out = dist;
  out.mix_toward(idx, rate);
  return out;
}

double mean_of(const SimplexVector& dist, const Grid& grid) {
  if (dist.size() != grid.size()) throw DimensionError("distribution length does not match grid");
  double m = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) m += dist[i] * grid.point(i);
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("sup_distance length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

QTable::QTable(std::size_t states, std::size_t actions, double init)
    : states_(states), actions_(actions), values_(states * actions, init) {
  if (states == 0 || actions == 0) throw DimensionError("Q-table needs at least one state and one action");
}

bool QTable::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t argmin(std::span<const double> row) {
  if (row.empty()) throw DimensionError("argmin of an empty row");
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] < row[best]) best = i;
  }
  return best;
}

VisitCounter::VisitCounter(std::size_t states, std::size_t actions, std::size_t time_steps)
    : states_(states), actions_(actions), counts_(states * actions * time_steps, 0) {}

std::uint64_t VisitCounter::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::size_t RngStream::categorical(const SimplexVector& dist) {
  const double u = uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist[i];
    if (u < acc) return i;
  }
  // u landed in the rounding slack above the last partial sum
  for (std::size_t i = dist.size(); i-- > 0;) {
    if (dist[i] > 0.0) return i;
  }
  return dist.size() - 1;
}

}  // namespace mfcg
