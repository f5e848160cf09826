#ifndef IRFFLOW_NUMERICS_HPP
#define IRFFLOW_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace irfflow {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Standard normal CDF. Saturates to 0/1 for extreme arguments.
double normal_cdf(double z);

/// Standard normal upper tail 1 - normal_cdf(z), accurate for large z.
double normal_ccdf(double z);

/// Standard normal quantile. Throws std::domain_error unless 0 < p < 1.
///
/// Rational approximation followed by a polish step against normal_cdf, so
/// that normal_cdf(normal_quantile(p)) reproduces p to ~1e-16 absolute.
double normal_quantile(double p);

inline double normal_log_pdf(double z) {
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// log N(x | mean, sd^2)
inline double gaussian_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return normal_log_pdf(z) - std::log(sd);
}

/// A log-domain scalar: -inf is a valid value (zero), NaN and +inf are not.
class LogValue {
 public:
  LogValue() = default;
  explicit LogValue(double value);

  double value() const { return value_; }
  bool is_zero() const { return value_ == kNegInf; }

 private:
  double value_ = kNegInf;
};

/// log(sum(exp(xs))). -inf entries contribute zero; an empty or all -inf
/// input returns -inf.
double log_sum_exp(std::span<const double> xs);

/// log(mean(exp(xs))).
double log_mean_exp(std::span<const double> xs);

/// (u + theta) mod 1 for u, theta in [0, 1); a result of exactly 1.0 wraps
/// to 0.0 so the output stays in [0, 1).
double mod1_shift(double u, double theta);

/// (u + 1 - theta) mod 1, the inverse of mod1_shift up to one rounding.
double mod1_unshift(double u, double theta);

/// Smallest periodic distance between a and b on the unit circle.
double mod1_distance(double a, double b);

using VectorMap = std::function<std::vector<double>(std::span<const double>)>;

/// log|det J| of a map R^k -> R^k from the central-difference Jacobian.
/// Test oracle: the caller keeps `point` at least `h` away from any branch
/// boundary. Throws NumericalError when the Jacobian is numerically singular.
double fd_logdet(const VectorMap& map, std::span<const double> point, double h = 1e-5);

/// log|det A| for a dense row-major k x k matrix via LU with partial pivoting.
/// Throws NumericalError on an exactly singular pivot.
double log_abs_det(std::vector<double> a, std::size_t k);

}  // namespace irfflow

#endif  // IRFFLOW_NUMERICS_HPP
