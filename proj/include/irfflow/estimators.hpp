#ifndef IRFFLOW_ESTIMATORS_HPP
#define IRFFLOW_ESTIMATORS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "irfflow/flows.hpp"
#include "irfflow/grid.hpp"
#include "irfflow/targets.hpp"

namespace irfflow {

/// Log importance weights log gamma_bar(S_n) - log q(S_n) at flow draws.
struct WeightSet {
  std::vector<double> log_w;

  std::size_t size() const { return log_w.size(); }
  /// Throws NumericalError unless at least one weight is finite and none is
  /// NaN or +inf.
  void validate() const;
};

struct MetricReport {
  std::string metric;
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Draws N states from the flow (seeded per draw) and evaluates their weights.
WeightSet importance_weights(const MixFlow& flow, std::size_t N, std::uint64_t seed,
                             std::size_t workers = 1);

/// Mean log-weight with its standard error.
MetricReport elbo(const WeightSet& weights, std::uint64_t seed = 0);
MetricReport elbo(const MixFlow& flow, std::size_t N, std::uint64_t seed, std::size_t workers = 1);

/// log of the mean weight; SE by the delta method, sd(w) / (sqrt(N) mean(w)).
MetricReport log_z_is(const WeightSet& weights, std::uint64_t seed = 0);
MetricReport log_z_is(const MixFlow& flow, std::size_t N, std::uint64_t seed,
                      std::size_t workers = 1);

/// (sum w)^2 / (N sum w^2) computed from log-weights.
double ess_per_sample(std::span<const double> log_w);

/// Target bin probabilities on a fixed grid, reusable across TV estimates.
struct TargetHistogram {
  Grid grid;
  std::vector<double> prob;
  double coverage = 1.0;
};

/// Quantile-box grid with `bins` bins per axis and quadrature probabilities.
TargetHistogram target_histogram(const Target& target, std::size_t bins,
                                 double min_coverage = 0.99);

/// 1-D reference histogram from a CDF.
TargetHistogram cdf_histogram(const std::function<double(double)>& cdf, Grid grid);

/// 1/2 sum_bins |p_hat - p| + 1/2 (sample mass outside the grid). Empty
/// entries of `samples` (non-finite draws) count as outside.
double tv_to_target(std::span<const std::vector<double>> samples, const TargetHistogram& hist);

/// Same estimator for scalar draws (1-D grids).
double tv_to_target(std::span<const double> samples, const TargetHistogram& hist);

struct McmcEss {
  double fraction = 1.0;  ///< ESS / n
  bool degenerate = false;
};

/// Geyer initial-positive-sequence estimate of ESS / n. Throws
/// std::invalid_argument for fewer than 100 points.
McmcEss mcmc_ess(std::span<const double> series);

struct InversionPoint {
  std::size_t T = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  std::size_t n_nonfinite = 0;
};

/// Reconstruction error ||f^{-T}(f^T(s)) - s||_2 over `n_starts` reference
/// draws, at every T in `Ts`. Errors of runs that leave the finite range are
/// +inf. `corrected = false` uses the uncorrected maps.
std::vector<InversionPoint> inversion_error_curve(const AugmentedReference& ref,
                                                  const ParamPath& path,
                                                  const std::vector<std::size_t>& Ts,
                                                  std::size_t n_starts, std::uint64_t seed,
                                                  bool corrected = true, std::size_t workers = 1);

using TestFunction = std::function<double(std::span<const double> x)>;

struct NamedTestFunction {
  std::string name;
  TestFunction fn;
};

struct DiagnosticTrace {
  std::string dynamics;  ///< inverse_irf | backward_process | homogeneous | mcmc
  std::string test_fn;
  std::vector<double> values;
  std::vector<double> running_mean;
};

/// Test-function traces along four dynamics started from one reference draw:
/// the inverse IRF orbit over the stream, the backward process, the inverse
/// orbit of the fixed-parameter map, and a plain MCMC chain.
std::vector<DiagnosticTrace> running_means(const AugmentedReference& ref,
                                           const FrozenStream& stream, const IrfParam& theta,
                                           std::size_t T,
                                           const std::vector<NamedTestFunction>& fns,
                                           std::uint64_t seed, std::size_t workers = 1);

/// Cumulative means of a trace.
std::vector<double> cumulative_mean(std::span<const double> values);

}  // namespace irfflow

#endif  // IRFFLOW_ESTIMATORS_HPP
