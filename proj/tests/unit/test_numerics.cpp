#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "irfflow/errors.hpp"
#include "irfflow/kernels.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/targets.hpp"

using namespace irfflow;

// oracle values from tests/oracles/derive_values.py (mpmath, 40 digits)
TEST_CASE("normal_cdf matches the quadrature oracle") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.959963985) - 0.97500000002688156) < 1e-14);
  const double tail = normal_cdf(-37.0);
  CHECK(tail > 0.0);
  CHECK(std::abs(tail / 5.7255712225256939e-300 - 1.0) < 1e-6);
  CHECK(normal_cdf(-40.0) >= 0.0);
  CHECK(normal_cdf(40.0) == 1.0);
}

TEST_CASE("normal_cdf absolute error on |z| <= 8") {
  // spot values: Phi(-1) and Phi(-8), mpmath
  CHECK(std::abs(normal_cdf(-1.0) - 0.15865525393145705) < 1e-14);
  CHECK(std::abs(normal_cdf(-8.0) - 6.2209605742717841e-16) < 1e-14);
  CHECK(std::abs(normal_cdf(8.0) - (1.0 - 6.2209605742717841e-16)) < 1e-14);
}

TEST_CASE("normal_cdf is monotone on a 10^4 grid over [-8, 8]") {
  const int n = 10000;
  double prev = normal_cdf(-8.0);
  double prev_upper = normal_ccdf(-8.0);
  for (int i = 1; i < n; ++i) {
    const double z = -8.0 + 16.0 * i / (n - 1);
    const double p = normal_cdf(z);
    const double q = normal_ccdf(z);
    CHECK(p >= prev);
    // strict where the true increment exceeds the spacing of doubles below 1
    if (z <= 7.5) CHECK(p > prev);
    // the upper tail carries the resolution the lower-tail value cannot
    if (z >= -7.5) CHECK(q < prev_upper);
    CHECK(q <= prev_upper);
    prev = p;
    prev_upper = q;
  }
}

TEST_CASE("normal_quantile oracle values and domain") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::abs(normal_quantile(0.975) / 1.9599639845400542 - 1.0) < 1e-12);
  CHECK(std::abs(normal_quantile(1e-300) / -37.047096299361199 - 1.0) < 1e-12);
  CHECK(std::abs(normal_quantile(1e-10) / -6.3613409024040562 - 1.0) < 1e-12);
  CHECK(std::abs(normal_quantile(1.0 - 1e-15) / 7.9414444874159788 - 1.0) < 1e-12);
  CHECK(std::abs(normal_quantile(normal_cdf(3.7)) - 3.7) < 1e-9);
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), std::domain_error);
}

TEST_CASE("cdf o quantile reproduces p") {
  // relative accuracy across the lower tail down to 1e-300
  for (double lp = -300.0; lp < -0.31; lp += 0.25) {
    const double p = std::pow(10.0, lp);
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-12 * p);
  }
  for (int i = 0; i <= 100000; ++i) {
    const double p = 1e-10 + (1.0 - 2e-10) * i / 100000.0;
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-12);
  }
  const double top = 1.0 - 1e-15;
  CHECK(std::abs(normal_cdf(normal_quantile(top)) - top) <= 1e-12);
}

TEST_CASE("quantile o cdf is the identity for |x| <= 6") {
  for (int i = 0; i <= 12000; ++i) {
    const double x = -6.0 + i * 1e-3;
    const double back = normal_quantile(normal_cdf(x));
    if (x <= 5.5) {
      CHECK(std::abs(back - x) < 1e-9);
    } else {
      // cdf(x) is stored to within half an ulp of 1; the round trip cannot
      // beat that spacing divided by the density
      const double floor = 0.5 * std::numeric_limits<double>::epsilon() /
                           std::exp(normal_log_pdf(x));
      CHECK(std::abs(back - x) <= 1.01 * floor);
    }
  }
}

TEST_CASE("log-domain accumulation") {
  const std::vector<double> same(7, -3.25);
  CHECK(log_mean_exp(same) == -3.25);
  const std::vector<double> big = {700.0, 699.0, -700.0};
  CHECK(std::abs(log_sum_exp(big) - (700.0 + std::log1p(std::exp(-1.0)))) < 1e-12);
  const std::vector<double> zeros = {kNegInf, kNegInf};
  CHECK(log_sum_exp(zeros) == kNegInf);
  CHECK(log_mean_exp(std::vector<double>{}) == kNegInf);
  const std::vector<double> with_zero = {kNegInf, std::log(2.0)};
  CHECK(std::abs(log_mean_exp(with_zero) - 0.0) < 1e-15);
  CHECK_THROWS(LogValue(std::nan("")));
  CHECK_THROWS(LogValue(std::numeric_limits<double>::infinity()));
  CHECK(LogValue(kNegInf).is_zero());
}

TEST_CASE("mod-1 shifts") {
  CHECK(std::abs(mod1_shift(0.7, 0.5) - 0.2) < 1e-15);
  CHECK(mod1_shift(0.3, 0.0) == 0.3);
  CHECK(mod1_unshift(0.3, 0.0) == 0.3);
  const double theta = std::fmod(std::numbers::pi / 7.0, 1.0);
  const double u = 0.999999;
  const double back = mod1_unshift(mod1_shift(u, theta), theta);
  CHECK(mod1_distance(back, u) < 1e-15);
  // exact 1.0 after the shift wraps to 0
  const double below = std::nextafter(1.0, 0.0);
  CHECK(mod1_shift(0.5, 0.5) == 0.0);
  CHECK(mod1_shift(below, below) < 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = i / 1000.0;
    const double t = std::fmod(0.37 * i, 1.0);
    const double s = mod1_shift(a, t);
    CHECK(s >= 0.0);
    CHECK(s < 1.0);
    CHECK(mod1_distance(mod1_unshift(s, t), a) < 1e-15);
  }
}

TEST_CASE("fd_logdet oracle") {
  const std::vector<double> p = {0.3, -1.2, 2.0};
  const VectorMap identity = [](std::span<const double> x) {
    return std::vector<double>(x.begin(), x.end());
  };
  CHECK(std::abs(fd_logdet(identity, p)) < 1e-10);

  const VectorMap diag = [](std::span<const double> x) {
    return std::vector<double>{2.0 * x[0], 3.0 * x[1]};
  };
  CHECK(std::abs(fd_logdet(diag, std::vector<double>{0.4, 0.9}) - std::log(6.0)) < 1e-8);

  // one leapfrog step on the harmonic oscillator is symplectic
  const TargetPtr normal = standard_normal_target(1);
  const VectorMap step = [&](std::span<const double> z) {
    const Proposal prop = leapfrog(*normal, z.subspan(0, 1), z.subspan(1, 1), 0.1, 1);
    return std::vector<double>{prop.x[0], prop.v[0]};
  };
  CHECK(std::abs(fd_logdet(step, std::vector<double>{1.0, 0.0})) < 1e-5);

  const VectorMap singular = [](std::span<const double> x) {
    return std::vector<double>{x[0] + x[1], x[0] + x[1]};
  };
  CHECK_THROWS_AS(fd_logdet(singular, std::vector<double>{1.0, 2.0}), NumericalError);
}
