#ifndef IRFFLOW_STATE_HPP
#define IRFFLOW_STATE_HPP

#include <span>
#include <vector>

namespace irfflow {

/// Point s = (x, v, u_v, u_a) of the augmented space X x V x [0,1)^d x [0,1).
struct AugmentedState {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> u_v;
  double u_a = 0.0;

  explicit AugmentedState(std::size_t d = 0) : x(d), v(d), u_v(d) {}

  std::size_t dim() const { return x.size(); }

  /// True when x, v are finite and every u lies in [0, 1).
  bool valid() const;
  bool finite() const;

  /// Concatenation (x, v, u_v, u_a) in R^{3d+1}.
  std::vector<double> flatten() const;
  static AugmentedState unflatten(std::span<const double> flat);
};

/// Euclidean distance between two states in R^{3d+1}; +inf when either
/// state is not finite.
double state_distance(const AugmentedState& a, const AugmentedState& b);

}  // namespace irfflow

#endif  // IRFFLOW_STATE_HPP
