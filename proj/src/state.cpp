#include "irfflow/state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irfflow {

namespace {
bool in_unit(double u) { return u >= 0.0 && u < 1.0; }
}  // namespace

bool AugmentedState::finite() const {
  for (double a : x) {
    if (!std::isfinite(a)) return false;
  }
  for (double a : v) {
    if (!std::isfinite(a)) return false;
  }
  return true;
}

bool AugmentedState::valid() const {
  if (!finite() || !in_unit(u_a)) return false;
  for (double u : u_v) {
    if (!in_unit(u)) return false;
  }
  return true;
}

std::vector<double> AugmentedState::flatten() const {
  std::vector<double> out;
  out.reserve(3 * x.size() + 1);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), v.begin(), v.end());
  out.insert(out.end(), u_v.begin(), u_v.end());
  out.push_back(u_a);
  return out;
}

AugmentedState AugmentedState::unflatten(std::span<const double> flat) {
  if (flat.size() % 3 != 1) throw std::invalid_argument("unflatten: size must be 3d + 1");
  const std::size_t d = flat.size() / 3;
  AugmentedState s(d);
  for (std::size_t i = 0; i < d; ++i) {
    s.x[i] = flat[i];
    s.v[i] = flat[d + i];
    s.u_v[i] = flat[2 * d + i];
  }
  s.u_a = flat[3 * d];
  return s;
}

double state_distance(const AugmentedState& a, const AugmentedState& b) {
  const auto fa = a.flatten();
  const auto fb = b.flatten();
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double d = fa[i] - fb[i];
    acc += d * d;
  }
  const double dist = std::sqrt(acc);
  return std::isfinite(dist) ? dist : std::numeric_limits<double>::infinity();
}

}  // namespace irfflow
