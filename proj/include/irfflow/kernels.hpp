#ifndef IRFFLOW_KERNELS_HPP
#define IRFFLOW_KERNELS_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irfflow/random.hpp"
#include "irfflow/targets.hpp"

namespace irfflow {

/// The auxiliary conditional rho(. | x) evaluated at one x. Every kernel here
/// uses a diagonal Gaussian N(location(x), scale^2 I), so the per-coordinate
/// CDF and quantile are closed-form.
class AuxFrame {
 public:
  AuxFrame(std::vector<double> location, double scale)
      : location_(std::move(location)), scale_(scale) {}

  std::size_t dim() const { return location_.size(); }
  std::span<const double> location() const { return location_; }
  double scale() const { return scale_; }

  /// sum_i log rho(v_i | x)
  double log_pdf(std::span<const double> v) const;
  double cdf(std::size_t i, double v) const;
  double quantile(std::size_t i, double p) const;
  void sample(Rng& rng, std::span<double> out) const;

 private:
  std::vector<double> location_;
  double scale_;
};

/// Output of an involution g(x, v) = (x', v').
struct Proposal {
  std::vector<double> x;
  std::vector<double> v;
  double log_jacobian = 0.0;  ///< log |det grad g(x, v)|
  bool finite = true;
  /// 1-based leapfrog step at which a non-finite value first appeared (HMC).
  std::size_t diverged_at = 0;
};

struct KernelConfig {
  std::string name = "rwmh";  ///< rwmh | mala | hmc
  double eps = 0.3;
  std::size_t leapfrog = 50;  ///< hmc only
};

/// Involutive MCMC kernel: auxiliary conditional + involution + Jacobian.
/// Immutable after construction.
class InvolutiveKernel {
 public:
  explicit InvolutiveKernel(TargetPtr target, double eps);
  virtual ~InvolutiveKernel() = default;

  virtual std::string_view name() const = 0;
  virtual AuxFrame auxiliary(std::span<const double> x) const = 0;
  virtual Proposal involution(std::span<const double> x, std::span<const double> v) const = 0;
  virtual KernelConfig config() const = 0;

  const Target& target() const { return *target_; }
  const TargetPtr& target_ptr() const { return target_; }
  std::size_t dim() const { return target_->dim(); }
  double eps() const { return eps_; }

  /// log gamma(x) + log rho(v | x); NaN is mapped to -inf.
  double log_joint(std::span<const double> x, std::span<const double> v) const;

  /// log r = log gamma_bar(x', v') - log gamma_bar(x, v) + log J_g(x, v), where
  /// `log_joint_xv` is log gamma_bar(x, v). Non-finite proposals give -inf.
  double log_mh_ratio(double log_joint_xv, const Proposal& proposal) const;

 protected:
  TargetPtr target_;
  double eps_;
};

using KernelPtr = std::shared_ptr<const InvolutiveKernel>;

/// g(x, v) = (x + eps v, -v), rho = N(0, I).
KernelPtr rwmh_kernel(TargetPtr target, double eps);

/// k leapfrog steps followed by a momentum flip, rho = N(0, I).
KernelPtr hmc_kernel(TargetPtr target, double eps, std::size_t leapfrog);

/// Metropolis-adjusted Langevin as an MH sampler with the swap involution
/// g(x, v) = (v, x) and rho(v | x) = N(x + eps^2 / 2 grad log gamma(x), eps^2 I).
KernelPtr mala_kernel(TargetPtr target, double eps);

/// Builds a kernel from a config; throws ConfigError for unknown names or
/// non-positive parameters.
KernelPtr make_kernel(TargetPtr target, const KernelConfig& config);

/// Leapfrog integration of k steps from (x, v); stops at the first non-finite
/// value and records its 1-based index in Proposal::diverged_at. No flip.
Proposal leapfrog(const Target& target, std::span<const double> x, std::span<const double> v,
                  double eps, std::size_t steps);

/// Throws NumericalError naming the leapfrog step when the proposal diverged.
void require_finite(const Proposal& proposal, std::string_view where);

struct McmcStep {
  std::vector<double> x;
  bool accepted = false;
  double log_r = 0.0;
};

/// One transition of the plain involutive MCMC kernel.
McmcStep mcmc_step(const InvolutiveKernel& kernel, std::span<const double> x, Rng& rng);

}  // namespace irfflow

#endif  // IRFFLOW_KERNELS_HPP
