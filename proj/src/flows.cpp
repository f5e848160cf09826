#include "irfflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "irfflow/errors.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/parallel.hpp"

namespace irfflow {

namespace {

constexpr std::pair<FlowFamily, std::string_view> kFamilyNames[] = {
    {FlowFamily::homogeneous, "homogeneous"},
    {FlowFamily::irf, "irf"},
    {FlowFamily::backward_irf, "backward_irf"},
    {FlowFamily::ensemble_irf, "ensemble_irf"},
    {FlowFamily::uncorrected_homogeneous, "uncorrected_homogeneous"},
};

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

bool is_homogeneous(FlowFamily f) {
  return f == FlowFamily::homogeneous || f == FlowFamily::uncorrected_homogeneous;
}

}  // namespace

std::string_view family_name(FlowFamily family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

FlowFamily parse_family(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  throw ConfigError("unknown flow family '" + std::string(name) + "'");
}

MixFlow::MixFlow(std::shared_ptr<const AugmentedReference> reference, FlowSpec spec)
    : MixFlow(std::move(reference), spec, {}) {}

MixFlow MixFlow::ensemble_of(std::shared_ptr<const AugmentedReference> reference, std::size_t T,
                             std::uint64_t stream_seed, std::vector<std::size_t> members) {
  if (members.empty()) throw std::invalid_argument("ensemble_of: no members");
  FlowSpec spec;
  spec.family = FlowFamily::ensemble_irf;
  spec.T = T;
  spec.M = members.size();
  spec.stream_seed = stream_seed;
  return MixFlow(std::move(reference), spec, std::move(members));
}

MixFlow::MixFlow(std::shared_ptr<const AugmentedReference> reference, FlowSpec spec,
                 std::vector<std::size_t> members)
    : reference_(std::move(reference)), spec_(spec), members_(std::move(members)) {
  if (!reference_) throw std::invalid_argument("MixFlow: null reference");
  const std::size_t d = dim();
  if (is_homogeneous(spec_.family)) {
    theta_ = fixed_theta(d, spec_.theta_v, spec_.theta_a);
    return;
  }
  std::size_t streams = 1;
  if (spec_.family == FlowFamily::ensemble_irf) {
    if (spec_.M == 0) throw ConfigError("ensemble flow needs M >= 1");
    if (members_.empty()) {
      members_.resize(spec_.M);
      for (std::size_t m = 0; m < spec_.M; ++m) members_[m] = m;
    }
    streams = *std::max_element(members_.begin(), members_.end()) + 1;
  }
  stream_ = std::make_shared<FrozenStream>(spec_.stream_seed, spec_.T, streams, d);
}

ParamPath MixFlow::path(std::size_t member) const {
  if (stream_) {
    const std::size_t m = members_.empty() ? 0 : members_[member];
    return ParamPath::stream(*stream_, m);
  }
  return ParamPath::fixed(theta_);
}

AugmentedState MixFlow::push(const AugmentedState& s0, std::size_t K) const {
  const InvolutiveKernel& k = kernel();
  switch (spec_.family) {
    case FlowFamily::homogeneous: {
      AugmentedState s = s0;
      for (std::size_t t = 0; t < K; ++t) s = irf_forward(k, s, theta_);
      return s;
    }
    case FlowFamily::uncorrected_homogeneous: {
      AugmentedState s = s0;
      for (std::size_t t = 0; t < K; ++t) s = uncorrected_forward(k, s, theta_);
      return s;
    }
    case FlowFamily::irf:
      return forward_orbit(k, s0, path(), 1, K);
    case FlowFamily::backward_irf: {
      // f_{theta_1} o ... o f_{theta_K}: theta_K acts first
      const ParamPath p = path();
      AugmentedState s = s0;
      for (std::size_t t = K; t >= 1; --t) s = irf_forward(k, s, p(t));
      return s;
    }
    case FlowFamily::ensemble_irf:
      return forward_orbit(k, s0, path(K - 1), 1, spec_.T);
  }
  throw std::logic_error("MixFlow: unhandled family");
}

AugmentedState MixFlow::sample(Rng& rng) const {
  AugmentedState s0 = reference_->sample(rng);
  if (spec_.T == 0) return s0;
  const std::size_t n = spec_.family == FlowFamily::ensemble_irf ? members_.size() : spec_.T;
  const std::size_t K = uniform_index(rng, n) + 1;
  return push(s0, K);
}

std::vector<double> MixFlow::log_ratio_terms(const AugmentedState& s) const {
  const std::size_t T = spec_.T;
  switch (spec_.family) {
    case FlowFamily::homogeneous:
    case FlowFamily::backward_irf:
      return inverse_orbit_ratios(*reference_, s, path(), T);
    case FlowFamily::irf:
      return backward_process(*reference_, s, path(), T, workers_);
    case FlowFamily::ensemble_irf:
      return parallel_map<double>(members_.size(), workers_, [&](std::size_t m) {
        return reference_->log_ratio(undo_orbit(kernel(), s, path(m), 1, T));
      });
    case FlowFamily::uncorrected_homogeneous:
      break;
  }
  throw std::logic_error("log_ratio_terms: the uncorrected flow is not measure-preserving");
}

double MixFlow::log_density(const AugmentedState& s) const {
  if (spec_.T == 0) return reference_->log_density(s);
  if (spec_.family == FlowFamily::uncorrected_homogeneous) return log_density_jacobian(s);
  const double log_target = reference_->log_target(s);
  if (!(log_target > kNegInf)) return kNegInf;
  const std::vector<double> terms = log_ratio_terms(s);
  return log_target + log_mean_exp(terms);
}

double MixFlow::log_density_jacobian(const AugmentedState& s) const {
  if (!is_homogeneous(spec_.family)) {
    throw std::logic_error("log_density_jacobian: defined for the homogeneous families only");
  }
  if (spec_.T == 0) return reference_->log_density(s);
  if (!std::isfinite(reference_->log_target(s))) return kNegInf;
  const InvolutiveKernel& k = kernel();
  const bool corrected = this->corrected();
  std::vector<double> terms;
  terms.reserve(spec_.T);
  AugmentedState cur = s;
  double log_jac = 0.0;
  StepInfo info;
  for (std::size_t t = 1; t <= spec_.T; ++t) {
    cur = corrected ? irf_inverse(k, cur, theta_, &info) : uncorrected_inverse(k, cur, theta_, &info);
    log_jac += info.log_jacobian;
    terms.push_back(reference_->log_density(cur) + log_jac);
  }
  return log_mean_exp(terms);
}

MarginalSample sample_marginal(const MixFlow& flow, std::size_t n, std::uint64_t seed,
                               std::size_t workers) {
  MarginalSample out;
  out.x.resize(n);
  std::vector<char> bad(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    Rng rng = draw_rng(seed, i);
    try {
      AugmentedState s = flow.sample(rng);
      if (s.finite()) {
        out.x[i] = std::move(s.x);
        return;
      }
    } catch (const NumericalError&) {
    }
    bad[i] = 1;
  });
  out.n_nonfinite = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
  return out;
}

std::vector<AugmentedState> sample_states(const MixFlow& flow, std::size_t n, std::uint64_t seed,
                                          std::size_t workers) {
  return parallel_map<AugmentedState>(n, workers, [&](std::size_t i) {
    Rng rng = draw_rng(seed, i);
    return flow.sample(rng);
  });
}

}  // namespace irfflow
