#include "irfflow/reference.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "irfflow/errors.hpp"
#include "irfflow/numerics.hpp"

namespace irfflow {

double MeanFieldGaussian::log_density(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    acc += gaussian_log_pdf(x[i], mean[i], std::exp(log_sd[i]));
  }
  return acc;
}

void MeanFieldGaussian::sample(Rng& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < mean.size(); ++i) {
    out[i] = mean[i] + std::exp(log_sd[i]) * standard_normal(rng);
  }
}

double batch_elbo(const Target& target, const MeanFieldGaussian& q, std::span<const double> noise) {
  const std::size_t d = q.dim();
  const std::size_t batch = noise.size() / d;
  std::vector<double> z(d);
  double acc = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < d; ++i) z[i] = q.mean[i] + std::exp(q.log_sd[i]) * noise[b * d + i];
    acc += target.log_density(z);
  }
  double entropy = 0.0;
  for (double ls : q.log_sd) entropy += ls;
  return acc / static_cast<double>(batch) + entropy;
}

void batch_elbo_gradient(const Target& target, const MeanFieldGaussian& q,
                         std::span<const double> noise, std::span<double> grad_mean,
                         std::span<double> grad_log_sd) {
  const std::size_t d = q.dim();
  const std::size_t batch = noise.size() / d;
  std::vector<double> z(d);
  std::vector<double> g(d);
  std::fill(grad_mean.begin(), grad_mean.end(), 0.0);
  std::fill(grad_log_sd.begin(), grad_log_sd.end(), 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < d; ++i) z[i] = q.mean[i] + std::exp(q.log_sd[i]) * noise[b * d + i];
    target.grad_log_density(z, g);
    for (std::size_t i = 0; i < d; ++i) {
      grad_mean[i] += g[i];
      grad_log_sd[i] += g[i] * std::exp(q.log_sd[i]) * noise[b * d + i];
    }
  }
  const double inv = 1.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < d; ++i) {
    grad_mean[i] *= inv;
    grad_log_sd[i] = grad_log_sd[i] * inv + 1.0;
  }
}

MeanFieldGaussian fit_advi(const Target& target, const AdviOptions& options) {
  if (options.batch == 0) throw ConfigError("fit_advi: batch must be positive");
  if (!(options.lr > 0.0)) throw ConfigError("fit_advi: learning rate must be positive");
  const std::size_t d = target.dim();
  MeanFieldGaussian q = MeanFieldGaussian::standard(d);
  Rng rng(options.seed);

  // parameters packed as (mean, log_sd)
  std::vector<double> m(2 * d, 0.0);
  std::vector<double> v(2 * d, 0.0);
  std::vector<double> noise(options.batch * d);
  std::vector<double> grad(2 * d);
  double b1_pow = 1.0;
  double b2_pow = 1.0;
  for (std::size_t step = 0; step < options.steps; ++step) {
    for (auto& e : noise) e = standard_normal(rng);
    batch_elbo_gradient(target, q, noise, std::span(grad).first(d), std::span(grad).subspan(d));
    for (double g : grad) {
      if (!std::isfinite(g)) {
        throw NumericalError("fit_advi: non-finite ELBO gradient at step " + std::to_string(step));
      }
    }
    b1_pow *= options.beta1;
    b2_pow *= options.beta2;
    for (std::size_t k = 0; k < 2 * d; ++k) {
      m[k] = options.beta1 * m[k] + (1.0 - options.beta1) * grad[k];
      v[k] = options.beta2 * v[k] + (1.0 - options.beta2) * grad[k] * grad[k];
      const double m_hat = m[k] / (1.0 - b1_pow);
      const double v_hat = v[k] / (1.0 - b2_pow);
      const double delta = options.lr * m_hat / (std::sqrt(v_hat) + options.adam_eps);
      if (k < d) {
        q.mean[k] += delta;
      } else {
        q.log_sd[k - d] += delta;
      }
    }
  }
  return q;
}

std::string to_json(const ReferenceRecord& record) {
  nlohmann::json j;
  j["target"] = record.target;
  j["seed"] = record.options.seed;
  j["steps"] = record.options.steps;
  j["batch"] = record.options.batch;
  j["lr"] = record.options.lr;
  j["mean"] = record.q.mean;
  j["log_sd"] = record.q.log_sd;
  return j.dump(2) + "\n";
}

ReferenceRecord reference_from_json(const std::string& text) {
  ReferenceRecord record;
  try {
    const auto j = nlohmann::json::parse(text);
    record.target = j.at("target").get<std::string>();
    record.options.seed = j.at("seed").get<std::uint64_t>();
    record.options.steps = j.at("steps").get<std::size_t>();
    record.options.batch = j.at("batch").get<std::size_t>();
    record.options.lr = j.at("lr").get<double>();
    record.q.mean = j.at("mean").get<std::vector<double>>();
    record.q.log_sd = j.at("log_sd").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("reference record: ") + e.what());
  }
  if (record.q.mean.size() != record.q.log_sd.size() || record.q.mean.empty()) {
    throw ConfigError("reference record: mean and log_sd must be non-empty and equal length");
  }
  return record;
}

void save_reference(const ReferenceRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write reference file " + path.string());
  out << to_json(record);
}

ReferenceRecord load_reference(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read reference file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return reference_from_json(buffer.str());
}

AugmentedReference::AugmentedReference(MeanFieldGaussian base, KernelPtr kernel)
    : base_(std::move(base)), kernel_(std::move(kernel)) {
  if (!kernel_) throw std::invalid_argument("AugmentedReference: null kernel");
  if (base_.dim() != kernel_->dim()) {
    throw std::invalid_argument("AugmentedReference: reference and target dimensions differ");
  }
}

AugmentedState AugmentedReference::sample(Rng& rng) const {
  const std::size_t d = base_.dim();
  AugmentedState s(d);
  base_.sample(rng, s.x);
  kernel_->auxiliary(s.x).sample(rng, s.v);
  for (auto& u : s.u_v) u = uniform01(rng);
  s.u_a = uniform01(rng);
  return s;
}

namespace {
bool uniforms_in_support(const AugmentedState& s) {
  if (!(s.u_a >= 0.0 && s.u_a < 1.0)) return false;
  for (double u : s.u_v) {
    if (!(u >= 0.0 && u < 1.0)) return false;
  }
  return true;
}
}  // namespace

double AugmentedReference::log_density(const AugmentedState& s) const {
  if (!uniforms_in_support(s) || !s.finite()) return kNegInf;
  return base_.log_density(s.x) + kernel_->auxiliary(s.x).log_pdf(s.v);
}

double AugmentedReference::log_target(const AugmentedState& s) const {
  if (!uniforms_in_support(s)) return kNegInf;
  return kernel_->log_joint(s.x, s.v);
}

double AugmentedReference::log_ratio(const AugmentedState& s) const {
  if (!uniforms_in_support(s) || !s.finite()) {
    throw NumericalError("log_ratio: state outside the support of the augmented target");
  }
  // rho(v | x) appears in both densities and cancels exactly
  const double log_gamma = kernel_->target().log_density(s.x);
  if (!(log_gamma > kNegInf) || std::isnan(log_gamma)) {
    throw NumericalError("log_ratio: augmented target density is zero");
  }
  return base_.log_density(s.x) - log_gamma;
}

}  // namespace irfflow
