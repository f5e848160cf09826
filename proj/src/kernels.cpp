#include "irfflow/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "irfflow/errors.hpp"
#include "irfflow/numerics.hpp"

namespace irfflow {

double AuxFrame::log_pdf(std::span<const double> v) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < location_.size(); ++i) {
    acc += gaussian_log_pdf(v[i], location_[i], scale_);
  }
  return acc;
}

double AuxFrame::cdf(std::size_t i, double v) const {
  return normal_cdf((v - location_[i]) / scale_);
}

double AuxFrame::quantile(std::size_t i, double p) const {
  return location_[i] + scale_ * normal_quantile(p);
}

void AuxFrame::sample(Rng& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < location_.size(); ++i) {
    out[i] = location_[i] + scale_ * standard_normal(rng);
  }
}

InvolutiveKernel::InvolutiveKernel(TargetPtr target, double eps)
    : target_(std::move(target)), eps_(eps) {
  if (!target_) throw std::invalid_argument("kernel: null target");
  if (!(eps_ > 0.0) || !std::isfinite(eps_)) throw ConfigError("kernel: step size must be positive");
}

double InvolutiveKernel::log_joint(std::span<const double> x, std::span<const double> v) const {
  for (double xi : x) {
    if (!std::isfinite(xi)) return kNegInf;
  }
  const double value = target_->log_density(x) + auxiliary(x).log_pdf(v);
  return std::isnan(value) ? kNegInf : value;
}

double InvolutiveKernel::log_mh_ratio(double log_joint_xv, const Proposal& proposal) const {
  if (!proposal.finite) return kNegInf;
  const double log_r = log_joint(proposal.x, proposal.v) - log_joint_xv + proposal.log_jacobian;
  return std::isnan(log_r) ? kNegInf : log_r;
}

Proposal leapfrog(const Target& target, std::span<const double> x, std::span<const double> v,
                  double eps, std::size_t steps) {
  const std::size_t d = x.size();
  Proposal out;
  out.x.assign(x.begin(), x.end());
  out.v.assign(v.begin(), v.end());
  std::vector<double> grad(d);
  target.grad_log_density(out.x, grad);
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t i = 0; i < d; ++i) out.v[i] += 0.5 * eps * grad[i];
    for (std::size_t i = 0; i < d; ++i) out.x[i] += eps * out.v[i];
    target.grad_log_density(out.x, grad);
    bool finite = true;
    for (std::size_t i = 0; i < d; ++i) {
      out.v[i] += 0.5 * eps * grad[i];
      finite = finite && std::isfinite(out.x[i]) && std::isfinite(out.v[i]);
    }
    if (!finite) {
      out.finite = false;
      out.diverged_at = step;
      return out;
    }
  }
  return out;
}

void require_finite(const Proposal& proposal, std::string_view where) {
  if (proposal.finite) return;
  std::string msg(where);
  msg += ": non-finite state";
  if (proposal.diverged_at > 0) msg += " at leapfrog step " + std::to_string(proposal.diverged_at);
  throw NumericalError(msg);
}

namespace {

class RwmhKernel final : public InvolutiveKernel {
 public:
  using InvolutiveKernel::InvolutiveKernel;
  std::string_view name() const override { return "rwmh"; }
  KernelConfig config() const override { return {"rwmh", eps_, 0}; }

  AuxFrame auxiliary(std::span<const double>) const override {
    return AuxFrame(std::vector<double>(dim(), 0.0), 1.0);
  }

  Proposal involution(std::span<const double> x, std::span<const double> v) const override {
    Proposal p;
    p.x.resize(x.size());
    p.v.resize(v.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      p.x[i] = x[i] + eps_ * v[i];
      p.v[i] = -v[i];
      p.finite = p.finite && std::isfinite(p.x[i]);
    }
    return p;
  }
};

class HmcKernel final : public InvolutiveKernel {
 public:
  HmcKernel(TargetPtr target, double eps, std::size_t steps)
      : InvolutiveKernel(std::move(target), eps), steps_(steps) {
    if (steps_ == 0) throw ConfigError("hmc: leapfrog count must be at least 1");
  }
  std::string_view name() const override { return "hmc"; }
  KernelConfig config() const override { return {"hmc", eps_, steps_}; }

  AuxFrame auxiliary(std::span<const double>) const override {
    return AuxFrame(std::vector<double>(dim(), 0.0), 1.0);
  }

  Proposal involution(std::span<const double> x, std::span<const double> v) const override {
    Proposal p = leapfrog(*target_, x, v, eps_, steps_);
    for (auto& vi : p.v) vi = -vi;
    return p;
  }

 private:
  std::size_t steps_;
};

class MalaKernel final : public InvolutiveKernel {
 public:
  using InvolutiveKernel::InvolutiveKernel;
  std::string_view name() const override { return "mala"; }
  KernelConfig config() const override { return {"mala", eps_, 0}; }

  AuxFrame auxiliary(std::span<const double> x) const override {
    std::vector<double> loc(dim());
    target_->grad_log_density(x, loc);
    for (std::size_t i = 0; i < loc.size(); ++i) loc[i] = x[i] + 0.5 * eps_ * eps_ * loc[i];
    return AuxFrame(std::move(loc), eps_);
  }

  Proposal involution(std::span<const double> x, std::span<const double> v) const override {
    Proposal p;
    p.x.assign(v.begin(), v.end());
    p.v.assign(x.begin(), x.end());
    for (double xi : p.x) p.finite = p.finite && std::isfinite(xi);
    return p;
  }
};

}  // namespace

KernelPtr rwmh_kernel(TargetPtr target, double eps) {
  return std::make_shared<RwmhKernel>(std::move(target), eps);
}

KernelPtr hmc_kernel(TargetPtr target, double eps, std::size_t leapfrog) {
  return std::make_shared<HmcKernel>(std::move(target), eps, leapfrog);
}

KernelPtr mala_kernel(TargetPtr target, double eps) {
  return std::make_shared<MalaKernel>(std::move(target), eps);
}

KernelPtr make_kernel(TargetPtr target, const KernelConfig& config) {
  if (config.name == "rwmh") return rwmh_kernel(std::move(target), config.eps);
  if (config.name == "mala") return mala_kernel(std::move(target), config.eps);
  if (config.name == "hmc") return hmc_kernel(std::move(target), config.eps, config.leapfrog);
  throw ConfigError("unknown kernel '" + config.name + "'");
}

McmcStep mcmc_step(const InvolutiveKernel& kernel, std::span<const double> x, Rng& rng) {
  const AuxFrame aux = kernel.auxiliary(x);
  std::vector<double> v(kernel.dim());
  aux.sample(rng, v);
  const Proposal prop = kernel.involution(x, v);
  const double log_joint_xv = kernel.log_joint(x, v);
  McmcStep out;
  out.log_r = kernel.log_mh_ratio(log_joint_xv, prop);
  const double u = uniform01(rng);
  out.accepted = out.log_r > kNegInf && std::log(u) <= out.log_r;
  if (out.accepted) {
    out.x = prop.x;
  } else {
    out.x.assign(x.begin(), x.end());
  }
  return out;
}

}  // namespace irfflow
