#ifndef IRFFLOW_TARGETS_HPP
#define IRFFLOW_TARGETS_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irfflow/random.hpp"

namespace irfflow {

/// Unnormalized target density gamma = Z * pi with a hand-derived gradient.
///
/// Implementations are immutable after construction and all evaluation
/// methods are reentrant.
class Target {
 public:
  virtual ~Target() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dim() const = 0;

  /// log gamma(x)
  virtual double log_density(std::span<const double> x) const = 0;
  /// grad log gamma(x), written into `grad` (size dim()).
  virtual void grad_log_density(std::span<const double> x, std::span<double> grad) const = 0;

  virtual bool has_exact_sampler() const { return false; }
  /// Draws one exact sample into `out`. Throws std::logic_error when
  /// has_exact_sampler() is false.
  virtual void sample(Rng& rng, std::span<double> out) const;

  /// log Z when known.
  virtual std::optional<double> log_z() const { return std::nullopt; }

  std::vector<double> grad(std::span<const double> x) const;
  std::vector<double> draw(Rng& rng) const;
};

using TargetPtr = std::shared_ptr<const Target>;

/// y ~ N(0, diag(100, 1)) pushed through (y1, y2 + b y1^2 - 100 b), b = 0.1.
TargetPtr banana();
/// x1 ~ N(0, 36), x2 | x1 ~ N(0, exp(x1 / 2)) with exp(x1 / 2) the variance.
TargetPtr funnel();
/// Equal-weight mixture of four Gaussians at (0, +-2), (+-2, 0), narrow sd 0.15.
TargetPtr cross();
/// y ~ N(0, diag(1, 0.12^2)) pushed through the radius-dependent rotation
/// by -|y| / 2.
TargetPtr warped_gaussian();

/// Diagonal Gaussian N(mean, diag(sd^2)), normalized. Test rig target.
TargetPtr gaussian(std::vector<double> mean, std::vector<double> sd);
inline TargetPtr standard_normal_target(std::size_t dim) {
  return gaussian(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

/// gamma'(x) = exp(offset) * gamma(x); log_z shifts by `offset`.
TargetPtr with_log_offset(TargetPtr base, double offset);

/// Looks up one of banana, funnel, cross, warped_gaussian, standard_normal
/// (2-D). Throws ConfigError for unknown names.
TargetPtr make_target(std::string_view name);

/// The four synthetic targets in a fixed order.
std::vector<TargetPtr> synthetic_targets();

/// The warped-Gaussian twist: rotation of y by -|y| / 2 (y in R^2).
std::vector<double> warp_forward(std::span<const double> y);
/// Inverse twist: rotation of x by +|x| / 2.
std::vector<double> warp_inverse(std::span<const double> x);

}  // namespace irfflow

#endif  // IRFFLOW_TARGETS_HPP
