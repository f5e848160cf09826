#ifndef IRFFLOW_TEST_SUPPORT_HPP
#define IRFFLOW_TEST_SUPPORT_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "irfflow/irf.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/kernels.hpp"
#include "irfflow/random.hpp"
#include "irfflow/state.hpp"
#include "irfflow/targets.hpp"

namespace irfflow::testing {

/// log gamma = 0 everywhere.
class FlatTarget final : public Target {
 public:
  explicit FlatTarget(std::size_t d) : d_(d) {}
  std::string_view name() const override { return "flat"; }
  std::size_t dim() const override { return d_; }
  double log_density(std::span<const double>) const override { return 0.0; }
  void grad_log_density(std::span<const double>, std::span<double> g) const override {
    for (auto& x : g) x = 0.0;
  }

 private:
  std::size_t d_;
};

/// Standard normal restricted to x_0 <= 1 (zero density beyond).
class TruncatedNormal final : public Target {
 public:
  std::string_view name() const override { return "truncated_normal"; }
  std::size_t dim() const override { return 1; }
  double log_density(std::span<const double> x) const override {
    return x[0] > 1.0 ? -std::numeric_limits<double>::infinity() : -0.5 * x[0] * x[0];
  }
  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    g[0] = -x[0];
  }
};

/// Finite density whose gradient is NaN once x_0 exceeds 3.
class NanGradient final : public Target {
 public:
  std::string_view name() const override { return "nan_gradient"; }
  std::size_t dim() const override { return 1; }
  double log_density(std::span<const double> x) const override { return -0.5 * x[0] * x[0]; }
  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    g[0] = x[0] > 3.0 ? std::numeric_limits<double>::quiet_NaN() : -x[0];
  }
};

inline std::vector<std::pair<std::string, KernelConfig>> paper_kernels() {
  return {{"rwmh", {"rwmh", 0.3, 1}}, {"mala", {"mala", 0.25, 1}}, {"hmc", {"hmc", 0.02, 50}}};
}

/// s with x from the target's exact sampler (or N(0, I)), v ~ rho(.|x), and
/// uniform u's.
inline AugmentedState random_state(const InvolutiveKernel& k, Rng& rng) {
  const std::size_t d = k.dim();
  AugmentedState s(d);
  if (k.target().has_exact_sampler()) {
    k.target().sample(rng, s.x);
  } else {
    for (auto& x : s.x) x = standard_normal(rng);
  }
  k.auxiliary(s.x).sample(rng, s.v);
  for (auto& u : s.u_v) u = uniform01(rng);
  s.u_a = uniform01(rng);
  return s;
}

inline IrfParam random_theta(std::size_t d, Rng& rng) {
  IrfParam p;
  p.theta_v.resize(d);
  for (auto& t : p.theta_v) t = uniform01(rng);
  p.theta_a = uniform01(rng);
  return p;
}

/// f_theta as a map on the flattened state in R^{3d+1}.
inline VectorMap flat_forward(const InvolutiveKernel& k, const IrfParam& theta) {
  return [&k, theta](std::span<const double> z) {
    return irf_forward(k, AugmentedState::unflatten(z), theta).flatten();
  };
}

/// log gamma_bar(s) up to the constant of the uniform factors.
inline double log_gamma_bar(const InvolutiveKernel& k, const AugmentedState& s) {
  return k.log_joint(s.x, s.v);
}

/// True when a finite-difference stencil of half-width h around s could cross
/// a discontinuity of f_theta: a mod-1 wrap of a shifted uniform, or the
/// accept/reject boundary u_a = r. The margin is `factor` * h.
inline bool near_branch_boundary(const InvolutiveKernel& k, const AugmentedState& s,
                                 const IrfParam& theta, double h, double factor = 10.0) {
  const double margin = factor * h;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double u = mod1_shift(s.u_v[i], theta.theta_v[i]);
    if (u < margin || u > 1.0 - margin) return true;
  }
  const double u_a = mod1_shift(s.u_a, theta.theta_a);
  if (u_a < margin || u_a > 1.0 - margin) return true;
  StepInfo info;
  irf_forward(k, s, theta, &info);
  return std::abs(u_a - std::exp(info.log_r)) <= margin;
}

}  // namespace irfflow::testing

#endif  // IRFFLOW_TEST_SUPPORT_HPP
