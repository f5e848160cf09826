#ifndef IRFFLOW_IRF_HPP
#define IRFFLOW_IRF_HPP

#include <cstdint>
#include <numbers>
#include <vector>

#include "irfflow/kernels.hpp"
#include "irfflow/reference.hpp"
#include "irfflow/state.hpp"

namespace irfflow {

/// theta = (theta_v, theta_a) in [0,1)^d x [0,1).
struct IrfParam {
  std::vector<double> theta_v;
  double theta_a = 0.0;
};

inline constexpr double kDefaultThetaV = std::numbers::pi / 8.0;
inline constexpr double kDefaultThetaA = std::numbers::pi / 7.0;

/// Constant parameter for homogeneous flows; every coordinate of theta_v gets
/// the same shift. Both values are reduced mod 1.
IrfParam fixed_theta(std::size_t dim, double theta_v = kDefaultThetaV,
                     double theta_a = kDefaultThetaA);

/// Cached iid table theta_t^(m), t = 1..T, m = 0..M-1, drawn from
/// Unif[0,1)^d x Unif[0,1). Entry (t, m) depends only on (seed, t, m), so
/// the stream is fully described by (seed, T, M) and never stored.
class FrozenStream {
 public:
  FrozenStream(std::uint64_t seed, std::size_t length, std::size_t streams, std::size_t dim);

  std::uint64_t seed() const { return seed_; }
  std::size_t length() const { return length_; }
  std::size_t streams() const { return streams_; }
  std::size_t dim() const { return dim_; }

  /// theta_t^(m) with 1-based t.
  const IrfParam& at(std::size_t t, std::size_t m = 0) const;

  /// Regenerates entry (t, m) from the seed alone.
  static IrfParam derive(std::uint64_t seed, std::size_t t, std::size_t m, std::size_t dim);

 private:
  std::uint64_t seed_;
  std::size_t length_;
  std::size_t streams_;
  std::size_t dim_;
  std::vector<IrfParam> table_;
};

/// Sequence theta_1, theta_2, ... drawn either from one stream of a
/// FrozenStream or repeating a fixed theta*. Non-owning for streams.
class ParamPath {
 public:
  static ParamPath stream(const FrozenStream& s, std::size_t m = 0) { return ParamPath(&s, m, {}); }
  static ParamPath fixed(IrfParam theta) { return ParamPath(nullptr, 0, std::move(theta)); }

  const IrfParam& operator()(std::size_t t) const {
    return stream_ ? stream_->at(t, m_) : fixed_;
  }
  /// Available length; unbounded for a fixed theta.
  std::size_t length() const;
  bool is_fixed() const { return stream_ == nullptr; }

 private:
  ParamPath(const FrozenStream* s, std::size_t m, IrfParam fixed)
      : stream_(s), m_(m), fixed_(std::move(fixed)) {}
  const FrozenStream* stream_;
  std::size_t m_;
  IrfParam fixed_;
};

/// Per-step diagnostics of one map application.
struct StepInfo {
  bool accepted = false;
  double log_r = 0.0;
  /// log|det| of the applied map at its input, computed from the branch
  /// mechanics (refresh ratio, involution Jacobian, u_a rescaling) rather than
  /// from the target density.
  double log_jacobian = 0.0;
};

using BranchTrace = std::vector<StepInfo>;

/// f_theta(s): uniform shifts, CDF/quantile refresh of (v, u_v), involution,
/// and the accept/reject step that rescales u_a on acceptance.
AugmentedState irf_forward(const InvolutiveKernel& kernel, const AugmentedState& s,
                           const IrfParam& theta, StepInfo* info = nullptr);

/// f_theta^{-1}(s'): infers the branch from u_a' * r~ <= 1 and undoes the
/// refresh and shifts.
AugmentedState irf_inverse(const InvolutiveKernel& kernel, const AugmentedState& s,
                           const IrfParam& theta, StepInfo* info = nullptr);

/// f_{theta_to} o ... o f_{theta_from}(s); theta_from is applied first.
AugmentedState forward_orbit(const InvolutiveKernel& kernel, const AugmentedState& s,
                             const ParamPath& path, std::size_t t_from, std::size_t t_to,
                             BranchTrace* trace = nullptr);

/// f^{-1}_{theta_from} o ... o f^{-1}_{theta_to}(s), the exact inverse of
/// forward_orbit over the same range; theta_to is undone first.
AugmentedState undo_orbit(const InvolutiveKernel& kernel, const AugmentedState& s,
                          const ParamPath& path, std::size_t t_from, std::size_t t_to);

/// s_t = f^{-1}_{theta_t}(s_{t-1}), s_0 = s; returns log(q0_bar / gamma_bar)(s_t)
/// for t = 1..T in O(T).
std::vector<double> inverse_orbit_ratios(const AugmentedReference& ref, const AugmentedState& s,
                                         const ParamPath& path, std::size_t T);

/// Backward process: for t = 1..T, log(q0_bar / gamma_bar) at
/// f^{-1}_{theta_1} o ... o f^{-1}_{theta_t}(s). The T terms are independent
/// and are evaluated on up to `workers` threads; the result is identical to
/// serial evaluation. O(T^2) map applications.
std::vector<double> backward_process(const AugmentedReference& ref, const AugmentedState& s,
                                     const ParamPath& path, std::size_t T, std::size_t workers = 1);

/// Uncorrected variant: shift u_v, refresh v by CDF/quantile, apply the
/// involution without an accept/reject step. u_a is carried unchanged.
/// Throws NumericalError when the trajectory leaves the finite range.
AugmentedState uncorrected_forward(const InvolutiveKernel& kernel, const AugmentedState& s,
                                   const IrfParam& theta, StepInfo* info = nullptr);
AugmentedState uncorrected_inverse(const InvolutiveKernel& kernel, const AugmentedState& s,
                                   const IrfParam& theta, StepInfo* info = nullptr);

}  // namespace irfflow

#endif  // IRFFLOW_IRF_HPP
