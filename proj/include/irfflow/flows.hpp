#ifndef IRFFLOW_FLOWS_HPP
#define IRFFLOW_FLOWS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "irfflow/irf.hpp"
#include "irfflow/random.hpp"
#include "irfflow/reference.hpp"
#include "irfflow/state.hpp"

namespace irfflow {

enum class FlowFamily { homogeneous, irf, backward_irf, ensemble_irf, uncorrected_homogeneous };

std::string_view family_name(FlowFamily family);
/// Accepts the names printed by family_name; throws ConfigError otherwise.
FlowFamily parse_family(std::string_view name);

struct FlowSpec {
  FlowFamily family = FlowFamily::irf;
  std::size_t T = 1;
  std::size_t M = 1;                ///< ensemble size
  std::uint64_t stream_seed = 0;    ///< frozen stream for irf / backward_irf / ensemble_irf
  double theta_v = kDefaultThetaV;  ///< fixed shift for the homogeneous families
  double theta_a = kDefaultThetaA;
};

/// A MixFlow on the augmented space. Densities are relative to gamma_bar,
/// i.e. exact up to +log Z of the target.
class MixFlow {
 public:
  MixFlow(std::shared_ptr<const AugmentedReference> reference, FlowSpec spec);

  /// Ensemble whose member m follows stream `members[m]` of a frozen table
  /// with max(members) + 1 streams. Repeated indices give identical members.
  static MixFlow ensemble_of(std::shared_ptr<const AugmentedReference> reference, std::size_t T,
                             std::uint64_t stream_seed, std::vector<std::size_t> members);

  const FlowSpec& spec() const { return spec_; }
  const AugmentedReference& reference() const { return *reference_; }
  const InvolutiveKernel& kernel() const { return reference_->kernel(); }
  std::size_t dim() const { return reference_->base().dim(); }
  bool corrected() const { return spec_.family != FlowFamily::uncorrected_homogeneous; }

  /// Threads used by density evaluation (over t for irf, over m for the
  /// ensemble). Results do not depend on this value.
  void set_workers(std::size_t workers) { workers_ = workers == 0 ? 1 : workers; }

  /// X0 ~ q0_bar, then K uniform on {1..T} (on {1..M} for the ensemble).
  /// The uncorrected family throws NumericalError when the trajectory diverges.
  AugmentedState sample(Rng& rng) const;

  /// log q_T(s) - log Z. -inf outside the support.
  double log_density(const AugmentedState& s) const;

  /// Homogeneous families only: density from explicit log-Jacobian products
  /// along the inverse orbit, never evaluating gamma_bar at the orbit points.
  double log_density_jacobian(const AugmentedState& s) const;

  /// The log(q0_bar / gamma_bar) terms averaged by log_density (corrected
  /// families), in the order of the family's defining sum.
  std::vector<double> log_ratio_terms(const AugmentedState& s) const;

 private:
  MixFlow(std::shared_ptr<const AugmentedReference> reference, FlowSpec spec,
          std::vector<std::size_t> members);
  ParamPath path(std::size_t member = 0) const;
  AugmentedState push(const AugmentedState& s0, std::size_t K) const;

  std::shared_ptr<const AugmentedReference> reference_;
  FlowSpec spec_;
  std::shared_ptr<const FrozenStream> stream_;
  std::vector<std::size_t> members_;
  IrfParam theta_;
  std::size_t workers_ = 1;
};

/// Generator for draw i of a seeded batch.
inline Rng draw_rng(std::uint64_t seed, std::size_t i) { return Rng(derive_seed(seed, i, 0x5a)); }

/// x-marginal draws from a flow. Draw i uses its own generator seeded from
/// (seed, i), so two flows sampled with the same seed share X0 and K.
struct MarginalSample {
  std::vector<std::vector<double>> x;  ///< non-finite draws are left empty
  std::size_t n_nonfinite = 0;
};

MarginalSample sample_marginal(const MixFlow& flow, std::size_t n, std::uint64_t seed,
                               std::size_t workers = 1);

/// Full augmented draws with the same seeding rule; throws on divergence.
std::vector<AugmentedState> sample_states(const MixFlow& flow, std::size_t n, std::uint64_t seed,
                                          std::size_t workers = 1);

}  // namespace irfflow

#endif  // IRFFLOW_FLOWS_HPP
