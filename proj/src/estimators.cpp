#include "irfflow/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irfflow/errors.hpp"
#include "irfflow/kernels.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/parallel.hpp"

namespace irfflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  double m = xs[mid];
  if (xs.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(xs.begin(), xs.begin() + mid));
  }
  return m;
}

}  // namespace

void WeightSet::validate() const {
  bool any_finite = false;
  for (double w : log_w) {
    if (std::isnan(w) || w == kInf) throw NumericalError("WeightSet: NaN or +inf log-weight");
    any_finite = any_finite || std::isfinite(w);
  }
  if (!any_finite) throw NumericalError("WeightSet: every weight is zero");
}

WeightSet importance_weights(const MixFlow& flow, std::size_t N, std::uint64_t seed,
                             std::size_t workers) {
  WeightSet w;
  w.log_w = parallel_map<double>(N, workers, [&](std::size_t n) {
    Rng rng = draw_rng(seed, n);
    const AugmentedState s = flow.sample(rng);
    return flow.reference().log_target(s) - flow.log_density(s);
  });
  return w;
}

MetricReport elbo(const WeightSet& weights, std::uint64_t seed) {
  weights.validate();
  const std::size_t n = weights.size();
  if (n < 2) throw std::invalid_argument("elbo: need at least two draws");
  double mean = 0.0;
  for (double w : weights.log_w) mean += w;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double w : weights.log_w) ss += (w - mean) * (w - mean);
  const double se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return {"elbo", mean, std::isfinite(mean) ? se : kInf, n, seed};
}

MetricReport elbo(const MixFlow& flow, std::size_t N, std::uint64_t seed, std::size_t workers) {
  return elbo(importance_weights(flow, N, seed, workers), seed);
}

MetricReport log_z_is(const WeightSet& weights, std::uint64_t seed) {
  weights.validate();
  const std::size_t n = weights.size();
  if (n < 2) throw std::invalid_argument("log_z_is: need at least two draws");
  const double top = *std::max_element(weights.log_w.begin(), weights.log_w.end());
  double mean = 0.0;
  for (double w : weights.log_w) mean += std::exp(w - top);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double w : weights.log_w) {
    const double d = std::exp(w - top) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {"log_z", top + std::log(mean), sd / (std::sqrt(static_cast<double>(n)) * mean), n, seed};
}

MetricReport log_z_is(const MixFlow& flow, std::size_t N, std::uint64_t seed,
                      std::size_t workers) {
  return log_z_is(importance_weights(flow, N, seed, workers), seed);
}

double ess_per_sample(std::span<const double> log_w) {
  if (log_w.empty()) throw std::invalid_argument("ess_per_sample: no weights");
  std::vector<double> twice(log_w.size());
  std::transform(log_w.begin(), log_w.end(), twice.begin(), [](double w) { return 2.0 * w; });
  const double log_sum = log_sum_exp(log_w);
  if (!(log_sum > kNegInf)) throw NumericalError("ess_per_sample: every weight is zero");
  const double log_ess = 2.0 * log_sum - log_sum_exp(twice);
  return std::exp(log_ess - std::log(static_cast<double>(log_w.size())));
}

TargetHistogram target_histogram(const Target& target, std::size_t bins, double min_coverage) {
  Grid grid = quantile_box_grid(target, bins);
  BinProbabilities bp = bin_probabilities(target, grid, min_coverage);
  return TargetHistogram{std::move(grid), std::move(bp.prob), bp.coverage};
}

TargetHistogram cdf_histogram(const std::function<double(double)>& cdf, Grid grid) {
  if (grid.dims() != 1) throw std::invalid_argument("cdf_histogram: 1-D grid required");
  std::vector<double> prob(grid.bin_count());
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    prob[i] = cdf(grid.bin_hi(i, 0)) - cdf(grid.bin_lo(i, 0));
    total += prob[i];
  }
  if (!(total > 0.0)) throw NumericalError("cdf_histogram: grid carries no mass");
  for (double& p : prob) p /= total;
  return TargetHistogram{std::move(grid), std::move(prob), total};
}

namespace {

double tv_from_counts(const std::vector<std::size_t>& counts, std::size_t outside, std::size_t n,
                      const TargetHistogram& hist) {
  if (n == 0) throw std::invalid_argument("tv_to_target: no samples");
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    sum += std::abs(static_cast<double>(counts[b]) * inv_n - hist.prob[b]);
  }
  return 0.5 * sum + 0.5 * static_cast<double>(outside) * inv_n;
}

}  // namespace

double tv_to_target(std::span<const std::vector<double>> samples, const TargetHistogram& hist) {
  std::vector<std::size_t> counts(hist.grid.bin_count(), 0);
  std::size_t outside = 0;
  for (const auto& x : samples) {
    const auto bin = x.empty() ? std::nullopt : hist.grid.locate(x);
    if (bin) {
      ++counts[*bin];
    } else {
      ++outside;
    }
  }
  return tv_from_counts(counts, outside, samples.size(), hist);
}

double tv_to_target(std::span<const double> samples, const TargetHistogram& hist) {
  std::vector<std::size_t> counts(hist.grid.bin_count(), 0);
  std::size_t outside = 0;
  for (double x : samples) {
    const auto bin = hist.grid.locate(std::span<const double>(&x, 1));
    if (bin) {
      ++counts[*bin];
    } else {
      ++outside;
    }
  }
  return tv_from_counts(counts, outside, samples.size(), hist);
}

McmcEss mcmc_ess(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) throw std::invalid_argument("mcmc_ess: need at least 100 points");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = series[i] - mean;

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += c[i] * c[i + lag];
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0) || !std::isfinite(c0)) return {1.0, true};

  // Geyer: sum pairs Gamma_k = rho_2k + rho_2k+1 while positive
  double tau = -1.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = (autocov(2 * k) + autocov(2 * k + 1)) / c0;
    if (!(pair > 0.0)) break;
    tau += 2.0 * pair;
  }
  return {1.0 / tau, false};
}

std::vector<InversionPoint> inversion_error_curve(const AugmentedReference& ref,
                                                  const ParamPath& path,
                                                  const std::vector<std::size_t>& Ts,
                                                  std::size_t n_starts, std::uint64_t seed,
                                                  bool corrected, std::size_t workers) {
  if (n_starts < 2) throw std::invalid_argument("inversion_error_curve: need n_starts >= 2");
  if (!std::is_sorted(Ts.begin(), Ts.end()) || (!Ts.empty() && Ts.front() == 0)) {
    throw std::invalid_argument("inversion_error_curve: T values must be ascending and positive");
  }
  const InvolutiveKernel& k = ref.kernel();
  auto fwd = [&](const AugmentedState& s, std::size_t t) {
    return corrected ? irf_forward(k, s, path(t)) : uncorrected_forward(k, s, path(t));
  };
  auto inv = [&](const AugmentedState& s, std::size_t t) {
    return corrected ? irf_inverse(k, s, path(t)) : uncorrected_inverse(k, s, path(t));
  };

  // errors[start][j] for T = Ts[j]
  const auto errors = parallel_map<std::vector<double>>(n_starts, workers, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, 0x17));
    const AugmentedState s0 = ref.sample(rng);
    std::vector<double> err(Ts.size(), kInf);
    AugmentedState cur = s0;
    std::size_t done = 0;
    try {
      for (std::size_t j = 0; j < Ts.size(); ++j) {
        for (; done < Ts[j]; ++done) cur = fwd(cur, done + 1);
        AugmentedState back = cur;
        for (std::size_t t = Ts[j]; t >= 1; --t) back = inv(back, t);
        err[j] = state_distance(back, s0);
      }
    } catch (const NumericalError&) {
      // remaining entries stay +inf
    }
    return err;
  });

  std::vector<InversionPoint> out;
  out.reserve(Ts.size());
  for (std::size_t j = 0; j < Ts.size(); ++j) {
    InversionPoint p;
    p.T = Ts[j];
    std::vector<double> col;
    col.reserve(n_starts);
    double sum = 0.0;
    for (const auto& e : errors) {
      col.push_back(e[j]);
      if (!std::isfinite(e[j])) ++p.n_nonfinite;
      sum += e[j];
    }
    p.mean = sum / static_cast<double>(n_starts);
    double ss = 0.0;
    for (double e : col) ss += (e - p.mean) * (e - p.mean);
    p.sd = std::isfinite(p.mean) ? std::sqrt(ss / static_cast<double>(n_starts - 1)) : kInf;
    p.median = median_of(std::move(col));
    out.push_back(p);
  }
  return out;
}

std::vector<double> cumulative_mean(std::span<const double> values) {
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    out[i] = sum / static_cast<double>(i + 1);
  }
  return out;
}

std::vector<DiagnosticTrace> running_means(const AugmentedReference& ref,
                                           const FrozenStream& stream, const IrfParam& theta,
                                           std::size_t T,
                                           const std::vector<NamedTestFunction>& fns,
                                           std::uint64_t seed, std::size_t workers) {
  if (stream.length() < T) throw std::invalid_argument("running_means: stream shorter than T");
  const InvolutiveKernel& k = ref.kernel();
  const ParamPath path = ParamPath::stream(stream);
  Rng rng(derive_seed(seed, 0, 0x33));
  const AugmentedState s0 = ref.sample(rng);

  std::vector<std::vector<double>> inverse_irf(T), homogeneous(T), mcmc(T);
  AugmentedState a = s0;
  AugmentedState h = s0;
  std::vector<double> x = s0.x;
  for (std::size_t t = 1; t <= T; ++t) {
    a = irf_inverse(k, a, path(t));
    h = irf_inverse(k, h, theta);
    x = mcmc_step(k, x, rng).x;
    inverse_irf[t - 1] = a.x;
    homogeneous[t - 1] = h.x;
    mcmc[t - 1] = x;
  }
  const auto backward = parallel_map<std::vector<double>>(T, workers, [&](std::size_t i) {
    return undo_orbit(k, s0, path, 1, i + 1).x;
  });

  std::vector<DiagnosticTrace> out;
  const std::pair<const char*, const std::vector<std::vector<double>>*> dynamics[] = {
      {"inverse_irf", &inverse_irf},
      {"backward_process", &backward},
      {"homogeneous", &homogeneous},
      {"mcmc", &mcmc},
  };
  for (const auto& [name, points] : dynamics) {
    for (const auto& f : fns) {
      DiagnosticTrace tr;
      tr.dynamics = name;
      tr.test_fn = f.name;
      tr.values.reserve(T);
      for (const auto& p : *points) tr.values.push_back(f.fn(p));
      tr.running_mean = cumulative_mean(tr.values);
      out.push_back(std::move(tr));
    }
  }
  return out;
}

}  // namespace irfflow
