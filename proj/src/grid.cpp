#include "irfflow/grid.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "irfflow/errors.hpp"
#include "irfflow/numerics.hpp"

namespace irfflow {

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) throw std::invalid_argument("Grid: 1 or 2 axes supported");
  for (const auto& a : axes_) {
    if (!(a.hi > a.lo) || a.bins == 0) throw std::invalid_argument("Grid: empty axis");
  }
}

std::size_t Grid::bin_count() const {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.bins;
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.width();
  return v;
}

std::optional<std::size_t> Grid::locate(std::span<const double> x) const {
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto& a = axes_[i];
    if (!std::isfinite(x[i]) || x[i] < a.lo || x[i] >= a.hi) return std::nullopt;
    auto b = static_cast<std::size_t>((x[i] - a.lo) / a.width());
    b = std::min(b, a.bins - 1);
    index += b * stride;
    stride *= a.bins;
  }
  return index;
}

double Grid::bin_lo(std::size_t index, std::size_t a) const {
  for (std::size_t i = 0; i < a; ++i) index /= axes_[i].bins;
  const auto b = index % axes_[a].bins;
  return axes_[a].lo + static_cast<double>(b) * axes_[a].width();
}

double Grid::bin_hi(std::size_t index, std::size_t a) const {
  for (std::size_t i = 0; i < a; ++i) index /= axes_[i].bins;
  const auto b = index % axes_[a].bins;
  return b + 1 == axes_[a].bins ? axes_[a].hi
                                : axes_[a].lo + static_cast<double>(b + 1) * axes_[a].width();
}

double quadrature_log_norm(const Target& target, const Grid& grid, double min_coverage) {
  if (target.dim() != 2 || grid.dims() != 2) {
    throw std::invalid_argument("quadrature_log_norm: 2-D target and grid required");
  }
  const auto& ax = grid.axis(0);
  const auto& ay = grid.axis(1);
  std::vector<double> terms;
  terms.reserve(grid.bin_count());
  std::array<double, 2> p{};
  for (std::size_t j = 0; j < ay.bins; ++j) {
    p[1] = ay.lo + (static_cast<double>(j) + 0.5) * ay.width();
    for (std::size_t i = 0; i < ax.bins; ++i) {
      p[0] = ax.lo + (static_cast<double>(i) + 0.5) * ax.width();
      terms.push_back(target.log_density(p));
    }
  }
  const double log_norm = log_sum_exp(terms) + std::log(grid.cell_volume());
  if (auto lz = target.log_z()) {
    const double coverage = std::exp(log_norm - *lz);
    if (coverage < min_coverage) {
      throw NumericalError("quadrature_log_norm: grid covers only " + std::to_string(coverage) +
                           " of the target mass");
    }
  }
  return log_norm;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr unsigned kMaxDepth = 12;
constexpr double kTol = 1e-9;

double integrate_1d(const Target& target, double lo, double hi) {
  auto f = [&](double x) {
    const double v[1] = {x};
    return std::exp(target.log_density(v));
  };
  return gauss_kronrod<double, 31>::integrate(f, lo, hi, kMaxDepth, kTol);
}

double integrate_2d(const Target& target, double x0, double x1, double y0, double y1) {
  auto outer = [&](double y) {
    auto inner = [&](double x) {
      const double v[2] = {x, y};
      return std::exp(target.log_density(v));
    };
    return gauss_kronrod<double, 31>::integrate(inner, x0, x1, kMaxDepth, kTol);
  };
  return gauss_kronrod<double, 31>::integrate(outer, y0, y1, kMaxDepth, kTol);
}

}  // namespace

BinProbabilities bin_probabilities(const Target& target, const Grid& grid, double min_coverage) {
  if (target.dim() != grid.dims()) {
    throw std::invalid_argument("bin_probabilities: grid and target dimensions differ");
  }
  BinProbabilities out;
  out.prob.resize(grid.bin_count());
  double total = 0.0;
  for (std::size_t b = 0; b < grid.bin_count(); ++b) {
    double mass = 0.0;
    if (grid.dims() == 1) {
      mass = integrate_1d(target, grid.bin_lo(b, 0), grid.bin_hi(b, 0));
    } else {
      mass = integrate_2d(target, grid.bin_lo(b, 0), grid.bin_hi(b, 0), grid.bin_lo(b, 1),
                          grid.bin_hi(b, 1));
    }
    out.prob[b] = mass;
    total += mass;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalError("bin_probabilities: grid carries no target mass");
  }
  for (auto& p : out.prob) p /= total;
  if (auto lz = target.log_z()) {
    out.coverage = total / std::exp(*lz);
    if (out.coverage < min_coverage) {
      throw NumericalError("bin_probabilities: grid covers only " + std::to_string(out.coverage) +
                           " of the target mass");
    }
  }
  return out;
}

Grid quantile_box_grid(const Target& target, std::size_t bins, double q, std::size_t n_samples,
                       std::uint64_t seed) {
  if (!target.has_exact_sampler()) {
    throw std::invalid_argument("quantile_box_grid: target needs an exact sampler");
  }
  Rng rng(seed);
  const std::size_t d = target.dim();
  std::vector<std::vector<double>> coords(d, std::vector<double>(n_samples));
  std::vector<double> x(d);
  for (std::size_t n = 0; n < n_samples; ++n) {
    target.sample(rng, x);
    for (std::size_t i = 0; i < d; ++i) coords[i][n] = x[i];
  }
  std::vector<Axis> axes;
  for (auto& c : coords) {
    const auto lo_k = static_cast<std::size_t>(q * static_cast<double>(n_samples - 1));
    const auto hi_k = static_cast<std::size_t>((1.0 - q) * static_cast<double>(n_samples - 1));
    std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lo_k), c.end());
    const double lo = c[lo_k];
    std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(hi_k), c.end());
    const double hi = c[hi_k];
    axes.push_back(Axis{lo, hi, bins});
  }
  return Grid(std::move(axes));
}

}  // namespace irfflow
