#include "irfflow/targets.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "irfflow/errors.hpp"
#include "irfflow/numerics.hpp"

namespace irfflow {

void Target::sample(Rng&, std::span<double>) const {
  throw std::logic_error(std::string(name()) + ": no exact sampler");
}

std::vector<double> Target::grad(std::span<const double> x) const {
  std::vector<double> g(dim());
  grad_log_density(x, g);
  return g;
}

std::vector<double> Target::draw(Rng& rng) const {
  std::vector<double> x(dim());
  sample(rng, x);
  return x;
}

namespace {

class Banana final : public Target {
 public:
  std::string_view name() const override { return "banana"; }
  std::size_t dim() const override { return 2; }

  double log_density(std::span<const double> x) const override {
    const double y2 = x[1] - kB * x[0] * x[0] + 100.0 * kB;
    return gaussian_log_pdf(x[0], 0.0, 10.0) + normal_log_pdf(y2);
  }

  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    const double y2 = x[1] - kB * x[0] * x[0] + 100.0 * kB;
    g[0] = -x[0] / 100.0 + 2.0 * kB * x[0] * y2;
    g[1] = -y2;
  }

  bool has_exact_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    const double y1 = 10.0 * standard_normal(rng);
    const double y2 = standard_normal(rng);
    out[0] = y1;
    out[1] = y2 + kB * y1 * y1 - 100.0 * kB;
  }
  std::optional<double> log_z() const override { return 0.0; }

 private:
  static constexpr double kB = 0.1;
};

class Funnel final : public Target {
 public:
  std::string_view name() const override { return "funnel"; }
  std::size_t dim() const override { return 2; }

  double log_density(std::span<const double> x) const override {
    // x2 | x1 has variance exp(x1 / 2), i.e. sd exp(x1 / 4)
    return gaussian_log_pdf(x[0], 0.0, 6.0) + gaussian_log_pdf(x[1], 0.0, std::exp(0.25 * x[0]));
  }

  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    const double inv_var = std::exp(-0.5 * x[0]);
    g[0] = -x[0] / 36.0 - 0.25 + 0.25 * x[1] * x[1] * inv_var;
    g[1] = -x[1] * inv_var;
  }

  bool has_exact_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    out[0] = 6.0 * standard_normal(rng);
    out[1] = std::exp(0.25 * out[0]) * standard_normal(rng);
  }
  std::optional<double> log_z() const override { return 0.0; }
};

class Cross final : public Target {
 public:
  std::string_view name() const override { return "cross"; }
  std::size_t dim() const override { return 2; }

  double log_density(std::span<const double> x) const override {
    std::array<double, 4> terms{};
    for (std::size_t k = 0; k < 4; ++k) terms[k] = component_log_pdf(k, x);
    return std::log(0.25) + log_sum_exp(terms);
  }

  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    std::array<double, 4> terms{};
    for (std::size_t k = 0; k < 4; ++k) terms[k] = component_log_pdf(k, x);
    const double total = log_sum_exp(terms);
    g[0] = 0.0;
    g[1] = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double w = std::exp(terms[k] - total);
      const auto& c = kComponents[k];
      g[0] -= w * (x[0] - c.mean[0]) / (c.sd[0] * c.sd[0]);
      g[1] -= w * (x[1] - c.mean[1]) / (c.sd[1] * c.sd[1]);
    }
  }

  bool has_exact_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    const auto& c = kComponents[rng() % 4];
    out[0] = c.mean[0] + c.sd[0] * standard_normal(rng);
    out[1] = c.mean[1] + c.sd[1] * standard_normal(rng);
  }
  std::optional<double> log_z() const override { return 0.0; }

 private:
  struct Component {
    std::array<double, 2> mean;
    std::array<double, 2> sd;
  };
  static constexpr std::array<Component, 4> kComponents = {{
      {{0.0, 2.0}, {0.15, 1.0}},
      {{-2.0, 0.0}, {1.0, 0.15}},
      {{2.0, 0.0}, {1.0, 0.15}},
      {{0.0, -2.0}, {0.15, 1.0}},
  }};

  static double component_log_pdf(std::size_t k, std::span<const double> x) {
    const auto& c = kComponents[k];
    return gaussian_log_pdf(x[0], c.mean[0], c.sd[0]) + gaussian_log_pdf(x[1], c.mean[1], c.sd[1]);
  }
};

std::array<double, 2> rotate(double x0, double x1, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * x0 - s * x1, s * x0 + c * x1};
}

class WarpedGaussian final : public Target {
 public:
  std::string_view name() const override { return "warped_gaussian"; }
  std::size_t dim() const override { return 2; }

  double log_density(std::span<const double> x) const override {
    // the twist keeps the radius and has unit Jacobian
    const double r = std::hypot(x[0], x[1]);
    const auto y = rotate(x[0], x[1], 0.5 * r);
    return normal_log_pdf(y[0]) + gaussian_log_pdf(y[1], 0.0, kSd2);
  }

  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    const double r = std::hypot(x[0], x[1]);
    const double angle = 0.5 * r;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double y0 = c * x[0] - s * x[1];
    const double y1 = s * x[0] + c * x[1];
    const double gy0 = -y0;
    const double gy1 = -y1 / (kSd2 * kSd2);
    // dy/dx = R + (dR/dangle x) (x / 2r)^T
    g[0] = c * gy0 + s * gy1;
    g[1] = -s * gy0 + c * gy1;
    if (r > 0.0) {
      // dR/dangle x = R J x with J the quarter turn, i.e. (-y1, y0)
      const double along = -y1 * gy0 + y0 * gy1;
      g[0] += along * x[0] / (2.0 * r);
      g[1] += along * x[1] / (2.0 * r);
    }
  }

  bool has_exact_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    const double y0 = standard_normal(rng);
    const double y1 = kSd2 * standard_normal(rng);
    const auto x = rotate(y0, y1, -0.5 * std::hypot(y0, y1));
    out[0] = x[0];
    out[1] = x[1];
  }
  std::optional<double> log_z() const override { return 0.0; }

 private:
  static constexpr double kSd2 = 0.12;
};

class DiagonalGaussian final : public Target {
 public:
  DiagonalGaussian(std::vector<double> mean, std::vector<double> sd)
      : mean_(std::move(mean)), sd_(std::move(sd)) {
    if (mean_.empty() || mean_.size() != sd_.size()) {
      throw std::invalid_argument("gaussian target: mean and sd must be non-empty and equal length");
    }
  }
  std::string_view name() const override { return "gaussian"; }
  std::size_t dim() const override { return mean_.size(); }

  double log_density(std::span<const double> x) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < mean_.size(); ++i) acc += gaussian_log_pdf(x[i], mean_[i], sd_[i]);
    return acc;
  }
  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    for (std::size_t i = 0; i < mean_.size(); ++i) g[i] = -(x[i] - mean_[i]) / (sd_[i] * sd_[i]);
  }
  bool has_exact_sampler() const override { return true; }
  void sample(Rng& rng, std::span<double> out) const override {
    for (std::size_t i = 0; i < mean_.size(); ++i) out[i] = mean_[i] + sd_[i] * standard_normal(rng);
  }
  std::optional<double> log_z() const override { return 0.0; }

 private:
  std::vector<double> mean_;
  std::vector<double> sd_;
};

class OffsetTarget final : public Target {
 public:
  OffsetTarget(TargetPtr base, double offset) : base_(std::move(base)), offset_(offset) {}
  std::string_view name() const override { return base_->name(); }
  std::size_t dim() const override { return base_->dim(); }
  double log_density(std::span<const double> x) const override {
    return base_->log_density(x) + offset_;
  }
  void grad_log_density(std::span<const double> x, std::span<double> g) const override {
    base_->grad_log_density(x, g);
  }
  bool has_exact_sampler() const override { return base_->has_exact_sampler(); }
  void sample(Rng& rng, std::span<double> out) const override { base_->sample(rng, out); }
  std::optional<double> log_z() const override {
    auto z = base_->log_z();
    if (z) return *z + offset_;
    return std::nullopt;
  }

 private:
  TargetPtr base_;
  double offset_;
};

}  // namespace

TargetPtr banana() { return std::make_shared<Banana>(); }
TargetPtr funnel() { return std::make_shared<Funnel>(); }
TargetPtr cross() { return std::make_shared<Cross>(); }
TargetPtr warped_gaussian() { return std::make_shared<WarpedGaussian>(); }

TargetPtr gaussian(std::vector<double> mean, std::vector<double> sd) {
  return std::make_shared<DiagonalGaussian>(std::move(mean), std::move(sd));
}

TargetPtr with_log_offset(TargetPtr base, double offset) {
  return std::make_shared<OffsetTarget>(std::move(base), offset);
}

TargetPtr make_target(std::string_view name) {
  if (name == "banana") return banana();
  if (name == "funnel") return funnel();
  if (name == "cross") return cross();
  if (name == "warped_gaussian") return warped_gaussian();
  if (name == "standard_normal") return standard_normal_target(2);
  throw ConfigError("unknown target '" + std::string(name) + "'");
}

std::vector<TargetPtr> synthetic_targets() { return {banana(), funnel(), cross(), warped_gaussian()}; }

std::vector<double> warp_forward(std::span<const double> y) {
  const auto x = rotate(y[0], y[1], -0.5 * std::hypot(y[0], y[1]));
  return {x[0], x[1]};
}

std::vector<double> warp_inverse(std::span<const double> x) {
  const auto y = rotate(x[0], x[1], 0.5 * std::hypot(x[0], x[1]));
  return {y[0], y[1]};
}

}  // namespace irfflow
