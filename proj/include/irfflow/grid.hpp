#ifndef IRFFLOW_GRID_HPP
#define IRFFLOW_GRID_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "irfflow/targets.hpp"

namespace irfflow {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 1;

  double width() const { return (hi - lo) / static_cast<double>(bins); }
};

/// Rectangular histogram grid over one or two axes. Bins are indexed
/// row-major with axis 0 fastest.
class Grid {
 public:
  Grid(std::vector<Axis> axes);

  static Grid one_d(double lo, double hi, std::size_t bins) { return Grid({Axis{lo, hi, bins}}); }
  static Grid two_d(Axis x, Axis y) { return Grid({x, y}); }

  std::size_t dims() const { return axes_.size(); }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  std::size_t bin_count() const;
  double cell_volume() const;

  /// Bin index of a point, or nullopt when it falls outside the grid or is not
  /// finite.
  std::optional<std::size_t> locate(std::span<const double> x) const;

  /// Lower/upper corners of bin `index` along axis `a`.
  double bin_lo(std::size_t index, std::size_t a) const;
  double bin_hi(std::size_t index, std::size_t a) const;

 private:
  std::vector<Axis> axes_;
};

using Grid2D = Grid;

/// Log of the midpoint Riemann sum of gamma over the grid (2-D targets).
///
/// When the target's log normalizer is known, throws NumericalError unless the
/// grid captures at least `min_coverage` of the mass.
double quadrature_log_norm(const Target& target, const Grid& grid,
                           double min_coverage = 1.0 - 1e-4);

struct BinProbabilities {
  std::vector<double> prob;  ///< normalized to sum 1 over the grid
  double coverage = 1.0;     ///< grid mass / Z when log Z is known, else 1
};

/// Target probability of every grid bin by nested adaptive Gauss-Kronrod
/// quadrature (inner over axis 0, outer over axis 1). Throws NumericalError
/// when log Z is known and the grid captures less than `min_coverage`.
BinProbabilities bin_probabilities(const Target& target, const Grid& grid, double min_coverage);

/// Axis-aligned box spanning the [q, 1 - q] marginal quantiles of
/// `n_samples` exact draws, split into `bins` bins per axis.
Grid quantile_box_grid(const Target& target, std::size_t bins, double q = 0.001,
                       std::size_t n_samples = 200000, std::uint64_t seed = 20250101);

}  // namespace irfflow

#endif  // IRFFLOW_GRID_HPP
