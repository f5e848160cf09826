#include "irfflow/irf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "irfflow/errors.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/parallel.hpp"
#include "irfflow/random.hpp"

namespace irfflow {

namespace {

constexpr double kBelowOne = 1.0 - 0x1.0p-53;
constexpr double kPosInf = std::numeric_limits<double>::infinity();

double reduce_mod1(double value) {
  double r = value - std::floor(value);
  return r >= 1.0 ? 0.0 : r;
}

// quantile argument: u in [0, 1) with 0 nudged into the open interval
double open_unit(double u) { return u > 0.0 ? u : std::numeric_limits<double>::denorm_min(); }

// CDF output kept in [0, 1)
double half_open_unit(double p) { return p < 1.0 ? p : kBelowOne; }

void check_input(const AugmentedState& s, const IrfParam& theta, const char* where) {
  if (!s.finite()) throw NumericalError(std::string(where) + ": non-finite input state");
  if (theta.theta_v.size() != s.dim()) {
    throw std::invalid_argument(std::string(where) + ": theta and state dimensions differ");
  }
}

void check_finite(double value, const char* where, const char* step) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string(where) + ": non-finite value in " + step);
  }
}

}  // namespace

IrfParam fixed_theta(std::size_t dim, double theta_v, double theta_a) {
  return IrfParam{std::vector<double>(dim, reduce_mod1(theta_v)), reduce_mod1(theta_a)};
}

FrozenStream::FrozenStream(std::uint64_t seed, std::size_t length, std::size_t streams,
                           std::size_t dim)
    : seed_(seed), length_(length), streams_(streams), dim_(dim) {
  if (streams_ == 0) throw std::invalid_argument("FrozenStream: at least one stream required");
  table_.reserve(length_ * streams_);
  for (std::size_t m = 0; m < streams_; ++m) {
    for (std::size_t t = 1; t <= length_; ++t) table_.push_back(derive(seed_, t, m, dim_));
  }
}

IrfParam FrozenStream::derive(std::uint64_t seed, std::size_t t, std::size_t m, std::size_t dim) {
  Rng rng(derive_seed(seed, t, m));
  IrfParam p;
  p.theta_v.resize(dim);
  for (auto& th : p.theta_v) th = uniform01(rng);
  p.theta_a = uniform01(rng);
  return p;
}

const IrfParam& FrozenStream::at(std::size_t t, std::size_t m) const {
  if (t == 0 || t > length_ || m >= streams_) {
    throw std::out_of_range("FrozenStream: index (" + std::to_string(t) + ", " +
                            std::to_string(m) + ") out of range");
  }
  return table_[m * length_ + (t - 1)];
}

std::size_t ParamPath::length() const {
  return stream_ ? stream_->length() : std::numeric_limits<std::size_t>::max();
}

AugmentedState irf_forward(const InvolutiveKernel& kernel, const AugmentedState& s,
                           const IrfParam& theta, StepInfo* info) {
  constexpr const char* where = "irf_forward";
  check_input(s, theta, where);
  const std::size_t d = s.dim();

  // Step 1: uniform refreshment
  std::vector<double> u_v(d);
  for (std::size_t i = 0; i < d; ++i) u_v[i] = mod1_shift(s.u_v[i], theta.theta_v[i]);
  const double u_a = mod1_shift(s.u_a, theta.theta_a);

  // Step 2: pair (v, u_v) through the CDF / quantile of rho(. | x)
  const AuxFrame aux = kernel.auxiliary(s.x);
  AugmentedState out(d);
  std::vector<double> v_tilde(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.u_v[i] = half_open_unit(aux.cdf(i, s.v[i]));
    v_tilde[i] = aux.quantile(i, open_unit(u_v[i]));
    check_finite(v_tilde[i], where, "quantile refresh");
  }

  // Step 3: involution and MH ratio
  const double log_joint_pre = kernel.log_joint(s.x, v_tilde);
  const Proposal prop = kernel.involution(s.x, v_tilde);
  const double log_r = kernel.log_mh_ratio(log_joint_pre, prop);

  // Step 4: accept iff u_a <= r; u_a = 0 always accepts a finite proposal
  const double log_u_a = u_a > 0.0 ? std::log(u_a) : kNegInf;
  const bool accept = log_r > kNegInf && log_u_a <= log_r;
  double log_jacobian = aux.log_pdf(s.v) - aux.log_pdf(v_tilde);
  if (accept) {
    out.x = prop.x;
    out.v = prop.v;
    out.u_a = u_a > 0.0 ? std::min(std::exp(log_u_a - log_r), kBelowOne) : 0.0;
    log_jacobian += prop.log_jacobian - log_r;
  } else {
    out.x = s.x;
    out.v = std::move(v_tilde);
    out.u_a = u_a;
  }
  if (info) *info = StepInfo{accept, log_r, log_jacobian};
  return out;
}

AugmentedState irf_inverse(const InvolutiveKernel& kernel, const AugmentedState& s,
                           const IrfParam& theta, StepInfo* info) {
  constexpr const char* where = "irf_inverse";
  check_input(s, theta, where);
  const std::size_t d = s.dim();

  // recover the unordered pair {(x, v~), (x', v')} and recompute the ratio
  const Proposal prop = kernel.involution(s.x, s.v);
  double log_r_tilde = kPosInf;
  if (prop.finite) {
    const double log_joint_out = kernel.log_joint(s.x, s.v);
    const double log_joint_pair = kernel.log_joint(prop.x, prop.v);
    // J_g(g(s)) = 1 / J_g(s)
    log_r_tilde = log_joint_out - log_joint_pair - prop.log_jacobian;
    if (std::isnan(log_r_tilde)) log_r_tilde = kPosInf;
  }

  // acceptance branch iff u_a' * r~ <= 1
  bool accepted = false;
  double u_a = s.u_a;
  std::vector<double> x;
  std::vector<double> v_tilde;
  if (log_r_tilde < kPosInf) {
    const double log_u = s.u_a > 0.0 ? std::log(s.u_a) + log_r_tilde : kNegInf;
    if (log_u <= 0.0) {
      accepted = true;
      u_a = s.u_a > 0.0 ? std::exp(log_u) : 0.0;
      x = prop.x;
      v_tilde = prop.v;
    }
  }
  if (!accepted) {
    x = s.x;
    v_tilde = s.v;
  }

  // undo the CDF / quantile pairing
  const AuxFrame aux = kernel.auxiliary(x);
  AugmentedState out(d);
  out.x = x;
  std::vector<double> u_v(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.v[i] = aux.quantile(i, open_unit(s.u_v[i]));
    check_finite(out.v[i], where, "quantile refresh");
    u_v[i] = half_open_unit(aux.cdf(i, v_tilde[i]));
  }

  // undo the uniform shifts
  for (std::size_t i = 0; i < d; ++i) out.u_v[i] = mod1_unshift(u_v[i], theta.theta_v[i]);
  out.u_a = mod1_unshift(u_a, theta.theta_a);

  if (info) {
    double forward_log_jacobian = aux.log_pdf(out.v) - aux.log_pdf(v_tilde);
    if (accepted) forward_log_jacobian += -prop.log_jacobian - log_r_tilde;
    *info = StepInfo{accepted, accepted ? log_r_tilde : -log_r_tilde, -forward_log_jacobian};
  }
  return out;
}

AugmentedState forward_orbit(const InvolutiveKernel& kernel, const AugmentedState& s,
                             const ParamPath& path, std::size_t t_from, std::size_t t_to,
                             BranchTrace* trace) {
  if (t_from == 0 || t_from > t_to + 1) throw std::invalid_argument("forward_orbit: bad range");
  AugmentedState cur = s;
  StepInfo info;
  for (std::size_t t = t_from; t <= t_to; ++t) {
    cur = irf_forward(kernel, cur, path(t), trace ? &info : nullptr);
    if (trace) trace->push_back(info);
  }
  return cur;
}

AugmentedState undo_orbit(const InvolutiveKernel& kernel, const AugmentedState& s,
                          const ParamPath& path, std::size_t t_from, std::size_t t_to) {
  if (t_from == 0 || t_from > t_to + 1) throw std::invalid_argument("undo_orbit: bad range");
  AugmentedState cur = s;
  for (std::size_t t = t_to; t >= t_from; --t) cur = irf_inverse(kernel, cur, path(t));
  return cur;
}

std::vector<double> inverse_orbit_ratios(const AugmentedReference& ref, const AugmentedState& s,
                                         const ParamPath& path, std::size_t T) {
  std::vector<double> out;
  out.reserve(T);
  AugmentedState cur = s;
  for (std::size_t t = 1; t <= T; ++t) {
    cur = irf_inverse(ref.kernel(), cur, path(t));
    out.push_back(ref.log_ratio(cur));
  }
  return out;
}

std::vector<double> backward_process(const AugmentedReference& ref, const AugmentedState& s,
                                     const ParamPath& path, std::size_t T, std::size_t workers) {
  return parallel_map<double>(T, workers, [&](std::size_t k) {
    return ref.log_ratio(undo_orbit(ref.kernel(), s, path, 1, k + 1));
  });
}

AugmentedState uncorrected_forward(const InvolutiveKernel& kernel, const AugmentedState& s,
                                   const IrfParam& theta, StepInfo* info) {
  constexpr const char* where = "uncorrected_forward";
  check_input(s, theta, where);
  const std::size_t d = s.dim();
  const AuxFrame aux = kernel.auxiliary(s.x);
  AugmentedState out(d);
  std::vector<double> v_tilde(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double u = mod1_shift(s.u_v[i], theta.theta_v[i]);
    out.u_v[i] = half_open_unit(aux.cdf(i, s.v[i]));
    v_tilde[i] = aux.quantile(i, open_unit(u));
    check_finite(v_tilde[i], where, "quantile refresh");
  }
  const Proposal prop = kernel.involution(s.x, v_tilde);
  require_finite(prop, where);
  out.x = prop.x;
  out.v = prop.v;
  out.u_a = s.u_a;
  if (info) {
    *info = StepInfo{true, 0.0, aux.log_pdf(s.v) - aux.log_pdf(v_tilde) + prop.log_jacobian};
  }
  return out;
}

AugmentedState uncorrected_inverse(const InvolutiveKernel& kernel, const AugmentedState& s,
                                   const IrfParam& theta, StepInfo* info) {
  constexpr const char* where = "uncorrected_inverse";
  check_input(s, theta, where);
  const std::size_t d = s.dim();
  const Proposal prop = kernel.involution(s.x, s.v);
  require_finite(prop, where);
  const AuxFrame aux = kernel.auxiliary(prop.x);
  AugmentedState out(d);
  out.x = prop.x;
  for (std::size_t i = 0; i < d; ++i) {
    out.v[i] = aux.quantile(i, open_unit(s.u_v[i]));
    check_finite(out.v[i], where, "quantile refresh");
    out.u_v[i] = mod1_unshift(half_open_unit(aux.cdf(i, prop.v[i])), theta.theta_v[i]);
  }
  out.u_a = s.u_a;
  if (info) {
    // log|det| of the inverse map = -(log|det| of the forward map at out)
    const double forward = aux.log_pdf(out.v) - aux.log_pdf(prop.v) - prop.log_jacobian;
    *info = StepInfo{true, 0.0, -forward};
  }
  return out;
}

}  // namespace irfflow
