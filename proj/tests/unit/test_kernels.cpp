#include <doctest.h>

#include <cmath>
#include <vector>

#include "irfflow/errors.hpp"
#include "irfflow/kernels.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/targets.hpp"
#include "support.hpp"

using namespace irfflow;

namespace {

double distance(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("RWMH involution") {
  // eps = 0.5 keeps every intermediate exactly representable
  const KernelPtr k = rwmh_kernel(banana(), 0.5);
  const std::vector<double> x = {1.0, 2.0};
  const std::vector<double> v = {0.5, -0.5};
  const Proposal once = k->involution(x, v);
  const Proposal twice = k->involution(once.x, once.v);
  CHECK(twice.x == x);
  CHECK(twice.v == v);
  CHECK(once.log_jacobian == 0.0);

  const VectorMap g = [&](std::span<const double> z) {
    const Proposal p = k->involution(z.subspan(0, 2), z.subspan(2, 2));
    return std::vector<double>{p.x[0], p.x[1], p.v[0], p.v[1]};
  };
  CHECK(std::abs(fd_logdet(g, std::vector<double>{0.3, -1.1, 0.7, 0.2})) < 1e-8);
  CHECK_THROWS_AS(rwmh_kernel(banana(), 0.0), ConfigError);
}

TEST_CASE("HMC leapfrog oracle on the harmonic oscillator") {
  const TargetPtr t = standard_normal_target(1);
  const Proposal p = leapfrog(*t, std::vector<double>{1.0}, std::vector<double>{0.0}, 0.1, 1);
  // hand evaluation: v_half = -0.05, x' = 0.995, v' = -0.09975
  CHECK(std::abs(p.x[0] - 0.995) < 1e-15);
  CHECK(std::abs(p.v[0] - -0.09975) < 1e-15);
  const KernelPtr k = hmc_kernel(t, 0.02, 50);
  CHECK(k->config().leapfrog == 50);
  CHECK_THROWS_AS(hmc_kernel(t, 0.02, 0), ConfigError);
}

TEST_CASE("HMC divergence is reported with the leapfrog index") {
  const KernelPtr k = hmc_kernel(funnel(), 5.0, 50);
  const Proposal p = k->involution(std::vector<double>{-20.0, 0.5}, std::vector<double>{3.0, 3.0});
  CHECK_FALSE(p.finite);
  CHECK(p.diverged_at >= 1);
  try {
    require_finite(p, "test");
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("leapfrog step " + std::to_string(p.diverged_at)) !=
          std::string::npos);
  }
  // a non-finite proposal is a certain rejection
  CHECK(k->log_mh_ratio(0.0, p) == kNegInf);
}

TEST_CASE("MALA as the MH swap") {
  const double eps = 0.25;
  const KernelPtr k = mala_kernel(standard_normal_target(1), eps);
  const AuxFrame aux = k->auxiliary(std::vector<double>{2.0});
  CHECK(std::abs(aux.location()[0] - (2.0 - eps * eps)) < 1e-15);
  CHECK(aux.scale() == eps);
  const std::vector<double> x = {0.4};
  const std::vector<double> v = {-1.3};
  const Proposal once = k->involution(x, v);
  const Proposal twice = k->involution(once.x, once.v);
  CHECK(twice.x == x);
  CHECK(twice.v == v);
}

TEST_CASE("involution and Jacobian antisymmetry for every kernel and target") {
  for (const TargetPtr& t : synthetic_targets()) {
    for (const auto& [name, cfg] : testing::paper_kernels()) {
      CAPTURE(t->name());
      CAPTURE(name);
      const KernelPtr k = make_kernel(t, cfg);
      Rng rng(21);
      for (int i = 0; i < 100; ++i) {
        const AugmentedState s = testing::random_state(*k, rng);
        const Proposal once = k->involution(s.x, s.v);
        REQUIRE(once.finite);
        const Proposal twice = k->involution(once.x, once.v);
        CHECK(distance(s.x, twice.x) + distance(s.v, twice.v) < 1e-8);
        CHECK(std::abs(once.log_jacobian + twice.log_jacobian) < 1e-12);
      }
    }
  }
}

TEST_CASE("auxiliary conditionals") {
  for (const auto& [name, cfg] : testing::paper_kernels()) {
    CAPTURE(name);
    const KernelPtr k = make_kernel(cross(), cfg);
    const std::vector<double> x = {0.3, 1.7};
    const AuxFrame aux = k->auxiliary(x);
    for (double v = -5.0; v <= 5.0; v += 0.01) {
      const double vv = aux.location()[0] + aux.scale() * v;
      CHECK(std::abs(aux.quantile(0, aux.cdf(0, vv)) - vv) < 1e-9 * std::max(1.0, std::abs(vv)));
    }
    // per-coordinate density integrates to 1 (midpoint rule over +-10 sd)
    double mass = 0.0;
    const int n = 20000;
    const double lo = aux.location()[1] - 10.0 * aux.scale();
    const double h = 20.0 * aux.scale() / n;
    for (int i = 0; i < n; ++i) {
      const double v = lo + (i + 0.5) * h;
      mass += std::exp(gaussian_log_pdf(v, aux.location()[1], aux.scale())) * h;
    }
    CHECK(std::abs(mass - 1.0) < 1e-9);
    const std::vector<double> both = {0.1, -0.2};
    CHECK(std::abs(aux.log_pdf(both) - gaussian_log_pdf(0.1, aux.location()[0], aux.scale()) -
                   gaussian_log_pdf(-0.2, aux.location()[1], aux.scale())) < 1e-14);
  }
}

TEST_CASE("make_kernel validation") {
  CHECK(make_kernel(banana(), {"mala", 0.25, 1})->name() == "mala");
  CHECK_THROWS_AS(make_kernel(banana(), {"nuts", 0.1, 1}), ConfigError);
  CHECK_THROWS_AS(make_kernel(banana(), {"hmc", -1.0, 5}), ConfigError);
}

TEST_CASE("mcmc_step") {
  SUBCASE("a ratio of at least one is always accepted") {
    // flat target, RWMH: r = rho(-v) / rho(v) = 1
    const KernelPtr k = rwmh_kernel(std::make_shared<testing::FlatTarget>(2), 0.5);
    Rng rng(4);
    std::vector<double> x = {0.0, 0.0};
    for (int i = 0; i < 1000; ++i) {
      const McmcStep st = mcmc_step(*k, x, rng);
      CHECK(st.accepted);
      x = st.x;
    }
  }
  SUBCASE("zero target density is rejected") {
    const KernelPtr k = rwmh_kernel(std::make_shared<testing::TruncatedNormal>(), 5.0);
    Rng rng(4);
    int outside = 0;
    for (int i = 0; i < 1000; ++i) {
      const McmcStep st = mcmc_step(*k, std::vector<double>{0.9}, rng);
      CHECK(st.x[0] <= 1.0);
      if (st.log_r == kNegInf) {
        ++outside;
        CHECK_FALSE(st.accepted);
      }
    }
    CHECK(outside > 0);
  }
  SUBCASE("banana chains started from the exact sampler keep mean zero") {
    // 10^4 chains, 100 RWMH steps each
    const KernelPtr k = rwmh_kernel(banana(), 0.3);
    Rng rng(6);
    double sum = 0.0;
    const int chains = 10000;
    for (int c = 0; c < chains; ++c) {
      std::vector<double> x = banana()->draw(rng);
      for (int i = 0; i < 100; ++i) x = mcmc_step(*k, x, rng).x;
      sum += x[0];
    }
    CHECK(std::abs(sum / chains) < 0.5);
  }
  SUBCASE("HMC with a tiny step accepts almost always") {
    const KernelPtr k = hmc_kernel(banana(), 1e-4, 50);
    Rng rng(7);
    std::vector<double> x = banana()->draw(rng);
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) {
      const McmcStep st = mcmc_step(*k, x, rng);
      accepted += st.accepted;
      x = st.x;
    }
    CHECK(accepted / 1000.0 > 0.999);
  }
}

TEST_CASE("statistical invariance of mcmc_step") {
  // 10^5 exact draws, 5 steps each; moments within 4 standard errors
  for (const TargetPtr& t : synthetic_targets()) {
    for (const auto& [name, cfg] : testing::paper_kernels()) {
      CAPTURE(t->name());
      CAPTURE(name);
      const KernelPtr k = make_kernel(t, cfg);
      Rng rng(31);
      const int n = 100000;
      std::vector<double> s0(2, 0.0), ss0(2, 0.0), q0(2, 0.0), s1(2, 0.0), ss1(2, 0.0);
      for (int i = 0; i < n; ++i) {
        std::vector<double> x = t->draw(rng);
        for (std::size_t j = 0; j < 2; ++j) {
          s0[j] += x[j];
          ss0[j] += x[j] * x[j];
          q0[j] += x[j] * x[j] * x[j] * x[j];
        }
        for (int step = 0; step < 5; ++step) x = mcmc_step(*k, x, rng).x;
        for (std::size_t j = 0; j < 2; ++j) {
          s1[j] += x[j];
          ss1[j] += x[j] * x[j];
        }
      }
      for (std::size_t j = 0; j < 2; ++j) {
        const double m0 = s0[j] / n, m1 = s1[j] / n;
        const double v0 = ss0[j] / n - m0 * m0, v1 = ss1[j] / n - m1 * m1;
        // two-sample bounds; the start and end samples are positively
        // correlated, which only makes these looser
        const double se_mean = std::sqrt(2.0 * v0 / n);
        CHECK(std::abs(m1 - m0) < 4.0 * se_mean);
        const double se_var = std::sqrt(2.0 * (q0[j] / n - v0 * v0) / n);
        CHECK(std::abs(v1 - v0) < 4.0 * se_var);
      }
    }
  }
}
