#include "irfflow/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "irfflow/errors.hpp"

namespace irfflow {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Acklam's rational approximation, relative error below 1.2e-9.
constexpr std::array<double, 6> kA = {-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB = {-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
constexpr std::array<double, 6> kC = {-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD = {7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kPLow = 0.02425;

// Lower-tail approximation, valid for 0 < q <= 0.5.
double lower_tail_guess(double q) {
  if (q < kPLow) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((kC[0] * t + kC[1]) * t + kC[2]) * t + kC[3]) * t + kC[4]) * t + kC[5]) /
           ((((kD[0] * t + kD[1]) * t + kD[2]) * t + kD[3]) * t + 1.0);
  }
  const double s = q - 0.5;
  const double r = s * s;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * s /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_ccdf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  // Work in the tail that holds p exactly; 1 - p is exact for p >= 0.5.
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;
  double x = lower_tail_guess(q);
  // One Halley polish step: the residual is normal_cdf(x) - q, computed in the
  // lower tail so that no cancellation against 1 occurs.
  const double residual = normal_cdf(x) - q;
  const double density = std::exp(normal_log_pdf(x));
  if (density > 0.0) {
    const double t = residual / density;
    x -= t / (1.0 + 0.5 * x * t);
  }
  return upper ? -x : x;
}

LogValue::LogValue(double value) : value_(value) {
  if (std::isnan(value) || value == std::numeric_limits<double>::infinity()) {
    throw NumericalError("LogValue: value must be finite or -inf");
  }
}

double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  if (std::isinf(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

double log_mean_exp(std::span<const double> xs) {
  if (xs.empty()) return kNegInf;
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf || std::isinf(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  // acc == n exactly when every entry equals hi
  return hi + std::log(acc / static_cast<double>(xs.size()));
}

double mod1_shift(double u, double theta) {
  double w = u + theta;
  if (w >= 1.0) w -= 1.0;
  if (w >= 1.0) w = 0.0;
  return w;
}

double mod1_unshift(double u, double theta) {
  double w = u - theta;
  if (w < 0.0) w += 1.0;
  if (w >= 1.0) w = 0.0;
  return w;
}

double mod1_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

double log_abs_det(std::vector<double> a, std::size_t k) {
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::fabs(x));
  double log_det = 0.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < k; ++row) {
      if (std::fabs(a[row * k + col]) > std::fabs(a[pivot * k + col])) pivot = row;
    }
    const double p = a[pivot * k + col];
    if (!std::isfinite(p) || std::fabs(p) <= 1e-13 * scale) {
      throw NumericalError("log_abs_det: singular matrix at column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a[pivot * k + j], a[col * k + j]);
    }
    log_det += std::log(std::fabs(p));
    for (std::size_t row = col + 1; row < k; ++row) {
      const double factor = a[row * k + col] / p;
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < k; ++j) a[row * k + j] -= factor * a[col * k + j];
    }
  }
  return log_det;
}

double fd_logdet(const VectorMap& map, std::span<const double> point, double h) {
  // five-point stencil; the central difference leaves O(h^2) errors of ~1e-4
  // next to the quantile edges at h = 1e-5
  const std::size_t k = point.size();
  std::vector<double> jac(k * k);
  std::vector<double> probe(point.begin(), point.end());
  static constexpr double kOffsets[4] = {2.0, 1.0, -1.0, -2.0};
  static constexpr double kWeights[4] = {-1.0, 8.0, -8.0, 1.0};
  for (std::size_t j = 0; j < k; ++j) {
    for (int m = 0; m < 4; ++m) {
      probe[j] = point[j] + kOffsets[m] * h;
      const auto value = map(probe);
      if (value.size() != k) throw std::invalid_argument("fd_logdet: map must be R^k -> R^k");
      for (std::size_t i = 0; i < k; ++i) jac[i * k + j] += kWeights[m] * value[i];
    }
    probe[j] = point[j];
    for (std::size_t i = 0; i < k; ++i) jac[i * k + j] /= 12.0 * h;
  }
  return log_abs_det(std::move(jac), k);
}

}  // namespace irfflow
