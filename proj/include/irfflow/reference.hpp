#ifndef IRFFLOW_REFERENCE_HPP
#define IRFFLOW_REFERENCE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "irfflow/kernels.hpp"
#include "irfflow/random.hpp"
#include "irfflow/state.hpp"
#include "irfflow/targets.hpp"

namespace irfflow {

/// Mean-field Gaussian q0(x) = prod_i N(x_i | mean_i, exp(log_sd_i)^2).
struct MeanFieldGaussian {
  std::vector<double> mean;
  std::vector<double> log_sd;

  static MeanFieldGaussian standard(std::size_t dim) {
    return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  }

  std::size_t dim() const { return mean.size(); }
  double log_density(std::span<const double> x) const;
  void sample(Rng& rng, std::span<double> out) const;
};

struct AdviOptions {
  std::size_t steps = 10000;
  std::size_t batch = 10;
  double lr = 1e-3;
  std::uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

/// Reparameterized batch ELBO (without the constant entropy offset) for a
/// fixed noise block of `batch * dim` standard normals.
double batch_elbo(const Target& target, const MeanFieldGaussian& q, std::span<const double> noise);

/// Gradient of batch_elbo with respect to (mean, log_sd), written into the
/// two output spans.
void batch_elbo_gradient(const Target& target, const MeanFieldGaussian& q,
                         std::span<const double> noise, std::span<double> grad_mean,
                         std::span<double> grad_log_sd);

/// Fits q0 by exactly `options.steps` Adam ascent steps on the reparameterized
/// ELBO, starting from mean 0 and log_sd 0. Deterministic given the options.
/// Throws NumericalError naming the step when a gradient is not finite.
MeanFieldGaussian fit_advi(const Target& target, const AdviOptions& options);

/// Serializable record of a fitted reference.
struct ReferenceRecord {
  std::string target;
  AdviOptions options;
  MeanFieldGaussian q;
};

std::string to_json(const ReferenceRecord& record);
ReferenceRecord reference_from_json(const std::string& text);
void save_reference(const ReferenceRecord& record, const std::filesystem::path& path);
ReferenceRecord load_reference(const std::filesystem::path& path);

/// q0 lifted to the augmented space:
/// q0_bar(s) = q0(x) rho(v | x) 1[u_v in [0,1)^d] 1[u_a in [0,1)],
/// with rho taken from the kernel the flow is built on.
class AugmentedReference {
 public:
  AugmentedReference(MeanFieldGaussian base, KernelPtr kernel);

  const MeanFieldGaussian& base() const { return base_; }
  const InvolutiveKernel& kernel() const { return *kernel_; }
  const KernelPtr& kernel_ptr() const { return kernel_; }

  AugmentedState sample(Rng& rng) const;
  double log_density(const AugmentedState& s) const;

  /// log gamma_bar(s) = log gamma(x) + log rho(v | x) on the unit cubes, -inf
  /// outside.
  double log_target(const AugmentedState& s) const;

  /// log q0_bar(s) - log gamma_bar(s). Throws NumericalError when
  /// gamma_bar(s) = 0.
  double log_ratio(const AugmentedState& s) const;

 private:
  MeanFieldGaussian base_;
  KernelPtr kernel_;
};

}  // namespace irfflow

#endif  // IRFFLOW_REFERENCE_HPP
