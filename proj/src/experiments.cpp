#include "irfflow/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "irfflow/errors.hpp"
#include "irfflow/kernels.hpp"
#include "irfflow/numerics.hpp"
#include "irfflow/parallel.hpp"
#include "irfflow/targets.hpp"

#ifndef IRFFLOW_VERSION
#define IRFFLOW_VERSION "v0.0.0-unknown"
#endif

namespace irfflow {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "target",     "targets",     "kernel",     "kernels",    "eps",         "eps_values",
      "leapfrog",   "family",      "families",   "T",          "T_values",    "M",
      "M_values",   "seed",        "seeds",      "samples",    "N",           "grid_bins",
      "theta_v",    "theta_a",     "reference",  "advi_steps", "advi_batch",  "advi_lr",
      "advi_seed",  "n_starts",    "output",     "trace_stride", "accept_target", "eps_lo",
      "eps_hi",     "iterations",  "max_probes", "tolerance",
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a finite number");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a non-negative integer");
  }
  return value;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
};

Summary summarize(std::vector<double> xs) {
  Summary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  s.median = n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  return s;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const Config& config, std::vector<std::string> columns)
      : out_(out), version_(version_string()), hash_(config.hash()) {
    out_ << "version,config_hash,seed";
    for (const auto& c : columns) out_ << ',' << c;
    out_ << '\n';
    width_ = columns.size();
  }

  void row(std::uint64_t seed, const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CsvWriter: row width mismatch");
    out_ << version_ << ',' << hash_ << ',' << seed;
    for (const auto& c : cells) out_ << ',' << c;
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::string version_;
  std::string hash_;
  std::size_t width_ = 0;
};

std::vector<std::uint64_t> run_seeds(const Config& c) {
  const std::uint64_t base = c.get_seed("seed", 1);
  const std::size_t n = c.get_count("seeds", 32);
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = base + i;
  return out;
}

KernelChoice kernel_from(const Config& c, const std::string& default_name, double default_eps) {
  KernelChoice k;
  k.config.name = c.get_string("kernel", default_name);
  k.config.eps = c.get_positive("eps", default_eps);
  k.config.leapfrog = c.get_count("leapfrog", 50);
  k.label = k.config.name;
  return k;
}

std::shared_ptr<const AugmentedReference> augmented(const Config& c, const TargetPtr& target,
                                                    const KernelConfig& kc) {
  return std::make_shared<AugmentedReference>(reference_for(c, *target),
                                              make_kernel(target, kc));
}

FlowSpec flow_spec(const Config& c, FlowFamily family, std::size_t T, std::size_t M,
                   std::uint64_t stream_seed) {
  FlowSpec s;
  s.family = family;
  s.T = T;
  s.M = M;
  s.stream_seed = stream_seed;
  s.theta_v = c.get_double("theta_v", kDefaultThetaV);
  s.theta_a = c.get_double("theta_a", kDefaultThetaA);
  return s;
}

// ---- subcommands -----------------------------------------------------------

void cmd_fit_reference(const Config& c, std::ostream& out, std::ostream&) {
  const std::string name = c.get_string("target", "banana");
  const TargetPtr target = make_target(name);
  ReferenceRecord record;
  record.target = name;
  record.options.steps = c.get_count("advi_steps", 10000);
  record.options.batch = c.get_count("advi_batch", 10);
  record.options.lr = c.get_positive("advi_lr", 1e-3);
  record.options.seed = c.get_seed("advi_seed", 1);
  record.q = fit_advi(*target, record.options);
  out << to_json(record);
}

void cmd_stability(const Config& c, std::ostream& out, std::ostream&) {
  const TargetPtr target = make_target(c.get_string("target", "banana"));
  const std::uint64_t seed = c.get_seed("seed", 1);
  const std::size_t n_starts = c.get_count("n_starts", 32);
  std::vector<std::size_t> Ts =
      c.get_counts("T_values", "1,2,5,10,20,50,100,200,300,500,700,1000");
  std::sort(Ts.begin(), Ts.end());
  const auto kernels = c.get_list(
      "kernels", "hmc:0.02:50,uncorrected_hmc:0.02:50,mala:0.25,rwmh:0.3");
  const MeanFieldGaussian q0 = reference_for(c, *target);
  const FrozenStream stream(stream_seed_of(seed), Ts.empty() ? 0 : Ts.back(), 1, target->dim());
  const std::size_t workers = default_workers();

  CsvWriter csv(out, c, {"kernel", "T", "mean_err", "sd_err", "median_err", "n_nonfinite"});
  for (const auto& spec : kernels) {
    const KernelChoice k = parse_kernel_choice(spec);
    const AugmentedReference ref(q0, make_kernel(target, k.config));
    const auto curve = inversion_error_curve(ref, ParamPath::stream(stream), Ts, n_starts, seed,
                                             !k.uncorrected, workers);
    for (const auto& p : curve) {
      csv.row(seed, {k.label, std::to_string(p.T), fmt(p.mean), fmt(p.sd), fmt(p.median),
                     std::to_string(p.n_nonfinite)});
    }
  }
}

void cmd_tv_sweep(const Config& c, std::ostream& out, std::ostream&) {
  const auto targets = c.get_list("targets", c.get_string("target", "banana"));
  const KernelChoice base = kernel_from(c, "hmc", 0.02);
  const auto eps_values = c.get_doubles("eps_values", fmt(base.config.eps));
  const auto families = c.get_list("families", "homogeneous,uncorrected_homogeneous");
  const auto Ts = c.get_counts("T_values", "1,10,50,100,200");
  const auto seeds = run_seeds(c);
  const std::size_t samples = c.get_count("samples", 512);
  const std::size_t bins = c.get_count("grid_bins", 8);
  const std::size_t workers = default_workers();

  CsvWriter csv(out, c, {"target", "kernel", "family", "eps", "T", "tv_mean", "tv_sd",
                         "tv_median", "n_nan"});
  for (const auto& tname : targets) {
    const TargetPtr target = make_target(tname);
    const TargetHistogram hist = target_histogram(*target, bins);
    const MeanFieldGaussian q0 = reference_for(c, *target);
    for (double eps : eps_values) {
      if (!(eps > 0.0)) throw ConfigError("eps_values must be positive");
      KernelConfig kc = base.config;
      kc.eps = eps;
      auto ref = std::make_shared<const AugmentedReference>(q0, make_kernel(target, kc));
      for (const auto& fname : families) {
        const FlowFamily family = parse_family(fname);
        for (std::size_t T : Ts) {
          std::vector<double> tvs;
          std::size_t n_nan = 0;
          for (std::uint64_t s : seeds) {
            const MixFlow flow(ref, flow_spec(c, family, T, c.get_count("M", 1), stream_seed_of(s)));
            const TvRun run = tv_run(flow, hist, samples, sample_seed_of(s), workers);
            tvs.push_back(run.tv);
            if (run.n_nonfinite > 0) ++n_nan;
          }
          const Summary sm = summarize(tvs);
          csv.row(seeds.front(), {tname, kc.name, fname, fmt(eps), std::to_string(T), fmt(sm.mean),
                                  fmt(sm.sd), fmt(sm.median), std::to_string(n_nan)});
        }
      }
    }
  }
}

void cmd_metrics(const Config& c, std::ostream& out, std::ostream&) {
  const std::string tname = c.get_string("target", "banana");
  const TargetPtr target = make_target(tname);
  const KernelChoice k = kernel_from(c, "hmc", 0.02);
  const FlowFamily family = parse_family(c.get_string("family", "irf"));
  const std::size_t T = c.get_count("T", 200);
  const std::size_t M = c.get_count("M", 1);
  const std::size_t N = c.get_count("N", 64);
  const auto ref = augmented(c, target, k.config);
  const std::size_t workers = default_workers();

  CsvWriter csv(out, c, {"target", "kernel", "family", "T", "metric", "value", "se", "n"});
  for (std::uint64_t s : run_seeds(c)) {
    const MixFlow flow(ref, flow_spec(c, family, T, M, stream_seed_of(s)));
    const WeightSet w = importance_weights(flow, N, sample_seed_of(s), workers);
    const MetricReport e = elbo(w, s);
    const MetricReport z = log_z_is(w, s);
    const std::vector<std::string> prefix = {tname, k.label, std::string(family_name(family)),
                                             std::to_string(T)};
    auto emit = [&](const std::string& metric, double value, double se) {
      auto cells = prefix;
      cells.insert(cells.end(), {metric, fmt(value), fmt(se), std::to_string(N)});
      csv.row(s, cells);
    };
    emit("elbo", e.value, e.se);
    emit("log_z", z.value, z.se);
    emit("ess_per_sample", ess_per_sample(w.log_w), std::nan(""));
  }
}

void cmd_ensemble_sweep(const Config& c, std::ostream& out, std::ostream&) {
  const std::string tname = c.get_string("target", "banana");
  const TargetPtr target = make_target(tname);
  const KernelChoice k = kernel_from(c, "hmc", 0.02);
  const auto ref = augmented(c, target, k.config);
  const TargetHistogram hist = target_histogram(*target, c.get_count("grid_bins", 8));
  const std::size_t samples = c.get_count("samples", 512);
  const std::size_t M_fixed = c.get_count("M", 30);
  const std::size_t T_fixed = c.get_count("T", 100);
  const auto seeds = run_seeds(c);
  const std::size_t workers = default_workers();

  CsvWriter csv(out, c, {"target", "kernel", "sweep", "M", "T", "tv_mean", "tv_sd", "tv_median"});
  auto point = [&](const char* sweep, std::size_t M, std::size_t T) {
    std::vector<double> tvs;
    for (std::uint64_t s : seeds) {
      const MixFlow flow(ref, flow_spec(c, FlowFamily::ensemble_irf, T, M, stream_seed_of(s)));
      tvs.push_back(tv_run(flow, hist, samples, sample_seed_of(s), workers).tv);
    }
    const Summary sm = summarize(tvs);
    csv.row(seeds.front(), {tname, k.label, sweep, std::to_string(M), std::to_string(T),
                            fmt(sm.mean), fmt(sm.sd), fmt(sm.median)});
  };
  for (std::size_t T : c.get_counts("T_values", "1,10,50,100,200")) point("T", M_fixed, T);
  for (std::size_t M : c.get_counts("M_values", "1,5,10,30,50")) {
    if (M == 0) throw ConfigError("M_values must be positive");
    point("M", M, T_fixed);
  }
}

void cmd_diagnostics(const Config& c, std::ostream& out, std::ostream&) {
  const std::string tname = c.get_string("target", "cross");
  const TargetPtr target = make_target(tname);
  const KernelChoice k = kernel_from(c, "rwmh", 0.3);
  const std::size_t T = c.get_count("T", 3000);
  const std::size_t stride = std::max<std::size_t>(1, c.get_count("trace_stride", 1));
  const auto ref = augmented(c, target, k.config);
  const IrfParam theta = fixed_theta(target->dim(), c.get_double("theta_v", kDefaultThetaV),
                                     c.get_double("theta_a", kDefaultThetaA));
  const MeanFieldGaussian& q0 = ref->base();
  const std::vector<NamedTestFunction> fns = {
      {"x1", [](std::span<const double> x) { return x[0]; }},
      {"x2", [](std::span<const double> x) { return x[1]; }},
      {"q0_over_pi",
       [&](std::span<const double> x) {
         return std::exp(q0.log_density(x) - target->log_density(x));
       }},
  };
  const std::size_t workers = default_workers();

  CsvWriter csv(out, c, {"target", "kernel", "kind", "dynamics", "test_fn", "t", "value",
                         "running_mean"});
  for (std::uint64_t s : run_seeds(c)) {
    const FrozenStream stream(stream_seed_of(s), T, 1, target->dim());
    const auto traces = running_means(*ref, stream, theta, T, fns, sample_seed_of(s), workers);
    for (const auto& tr : traces) {
      for (std::size_t t = stride - 1; t < T; t += stride) {
        csv.row(s, {tname, k.label, "trace", tr.dynamics, tr.test_fn, std::to_string(t + 1),
                    fmt(tr.values[t]), fmt(tr.running_mean[t])});
      }
    }
    for (const auto& tr : traces) {
      if (tr.values.size() < 100) continue;
      const McmcEss ess = mcmc_ess(tr.values);
      csv.row(s, {tname, k.label, ess.degenerate ? "ess_degenerate" : "ess", tr.dynamics,
                  tr.test_fn, std::to_string(T), fmt(ess.fraction), ""});
    }
  }
}

// fraction of accepted steps along `iterations` forward IRF steps
double irf_acceptance(const AugmentedReference& ref, const FrozenStream& stream,
                      std::uint64_t seed) {
  Rng rng(seed);
  AugmentedState s = ref.sample(rng);
  std::size_t accepted = 0;
  StepInfo info;
  for (std::size_t t = 1; t <= stream.length(); ++t) {
    s = irf_forward(ref.kernel(), s, stream.at(t), &info);
    accepted += info.accepted ? 1 : 0;
  }
  return static_cast<double>(accepted) / static_cast<double>(stream.length());
}

void cmd_tune_step(const Config& c, std::ostream& out, std::ostream& log) {
  const std::string tname = c.get_string("target", "banana");
  const TargetPtr target = make_target(tname);
  KernelChoice k = kernel_from(c, "rwmh", 0.3);
  const double goal = c.get_double("accept_target", 0.8);
  const double lo = c.get_positive("eps_lo", 0.001);
  const double hi = c.get_positive("eps_hi", 10.0);
  const std::size_t iterations = c.get_count("iterations", 5000);
  const std::size_t max_probes = c.get_count("max_probes", 30);
  const double tol = c.get_positive("tolerance", 0.02);
  const std::uint64_t seed = c.get_seed("seed", 1);
  if (!(goal > 0.0 && goal < 1.0)) throw ConfigError("accept_target must lie in (0, 1)");
  if (!(lo < hi)) throw ConfigError("eps_lo must be below eps_hi");
  if (iterations == 0) throw ConfigError("iterations must be positive");

  const MeanFieldGaussian q0 = reference_for(c, *target);
  const FrozenStream stream(stream_seed_of(seed), iterations, 1, target->dim());
  auto acceptance = [&](double eps) {
    k.config.eps = eps;
    const AugmentedReference ref(q0, make_kernel(target, k.config));
    return irf_acceptance(ref, stream, sample_seed_of(seed));
  };

  const StepSearch search = bisect_step(acceptance, lo, hi, goal, tol, max_probes);
  CsvWriter csv(out, c, {"target", "kernel", "kind", "eps", "acceptance"});
  for (const auto& [eps, acc] : search.probes) {
    csv.row(seed, {tname, k.config.name, "probe", fmt(eps), fmt(acc)});
  }
  if (!search.monotone) {
    log << "warning: acceptance is not monotone in the step size; returning the best probe\n";
  }
  csv.row(seed, {tname, k.config.name, "result", fmt(search.eps), fmt(search.acceptance)});
}

using Command = void (*)(const Config&, std::ostream&, std::ostream&);

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> table = {
      {"fit-reference", cmd_fit_reference}, {"stability", cmd_stability},
      {"tv-sweep", cmd_tv_sweep},           {"metrics", cmd_metrics},
      {"ensemble-sweep", cmd_ensemble_sweep}, {"diagnostics", cmd_diagnostics},
      {"tune-step", cmd_tune_step},
  };
  return table;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!known_keys().count(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (c.values_.count(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& key, std::string value) {
  if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = std::move(value);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

double Config::get_positive(const std::string& key, double fallback) const {
  const double v = get_double(key, fallback);
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

std::size_t Config::get_count(const std::string& key, std::size_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback
                             : static_cast<std::size_t>(parse_unsigned(key, it->second));
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_unsigned(key, it->second);
}

std::vector<std::string> Config::get_list(const std::string& key,
                                          const std::string& fallback) const {
  auto items = split_list(get_string(key, fallback));
  if (items.empty()) throw ConfigError("key '" + key + "' needs at least one entry");
  return items;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::string& fallback) const {
  std::vector<double> out;
  for (const auto& item : get_list(key, fallback)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::size_t> Config::get_counts(const std::string& key,
                                            const std::string& fallback) const {
  std::vector<std::size_t> out;
  for (const auto& item : get_list(key, fallback)) {
    out.push_back(static_cast<std::size_t>(parse_unsigned(key, item)));
  }
  return out;
}

std::string Config::canonical() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + "=" + v + "\n";
  return s;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

KernelChoice parse_kernel_choice(std::string_view text) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() < 2 || parts.size() > 3) {
    throw ConfigError("kernel '" + std::string(text) + "': expected name:eps[:leapfrog]");
  }
  KernelChoice k;
  k.label = std::string(text);
  k.config.name = parts[0];
  if (k.config.name == "uncorrected_hmc") {
    k.config.name = "hmc";
    k.uncorrected = true;
  }
  k.config.eps = parse_double("kernels", parts[1]);
  if (!(k.config.eps > 0.0)) throw ConfigError("kernel step size must be positive");
  if (parts.size() == 3) {
    k.config.leapfrog = static_cast<std::size_t>(parse_unsigned("kernels", parts[2]));
  }
  if (k.config.name != "hmc" && parts.size() == 3) {
    throw ConfigError("kernel '" + std::string(text) + "': leapfrog count is for hmc only");
  }
  return k;
}

MeanFieldGaussian reference_for(const Config& config, const Target& target) {
  if (config.has("reference")) {
    ReferenceRecord rec = load_reference(config.get_string("reference", ""));
    if (rec.target != target.name() && make_target(rec.target)->name() != target.name()) {
      throw ConfigError("reference file was fitted to '" + rec.target + "', not '" +
                        std::string(target.name()) + "'");
    }
    return rec.q;
  }
  AdviOptions opt;
  opt.steps = config.get_count("advi_steps", 10000);
  opt.batch = config.get_count("advi_batch", 10);
  opt.lr = config.get_positive("advi_lr", 1e-3);
  opt.seed = config.get_seed("advi_seed", 1);
  if (opt.batch == 0) throw ConfigError("advi_batch must be positive");
  return fit_advi(target, opt);
}

TvRun tv_run(const MixFlow& flow, const TargetHistogram& hist, std::size_t samples,
             std::uint64_t seed, std::size_t workers) {
  const MarginalSample ms = sample_marginal(flow, samples, seed, workers);
  return TvRun{tv_to_target(ms.x, hist), ms.n_nonfinite};
}

StepSearch bisect_step(const std::function<double(double)>& acceptance, double lo, double hi,
                       double goal, double tol, std::size_t max_probes) {
  if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("bisect_step: need 0 < lo < hi");
  StepSearch out;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < max_probes; ++i) {
    const double eps = std::sqrt(lo * hi);
    const double acc = acceptance(eps);
    for (const auto& [e, a] : out.probes) {
      // acceptance should not increase with eps beyond Monte Carlo noise
      if ((e < eps && a + 0.05 < acc) || (e > eps && a > acc + 0.05)) out.monotone = false;
    }
    out.probes.emplace_back(eps, acc);
    if (std::abs(acc - goal) < best_gap) {
      best_gap = std::abs(acc - goal);
      out.eps = eps;
      out.acceptance = acc;
    }
    if (std::abs(acc - goal) <= tol) break;
    if (acc > goal) {
      lo = eps;
    } else {
      hi = eps;
    }
  }
  return out;
}

std::uint64_t stream_seed_of(std::uint64_t run_seed) { return derive_seed(run_seed, 1, 0x51); }
std::uint64_t sample_seed_of(std::uint64_t run_seed) { return derive_seed(run_seed, 2, 0x51); }

void run_subcommand(std::string_view name, const Config& config, std::ostream& out,
                    std::ostream& log) {
  for (const auto& [n, fn] : commands()) {
    if (n == name) {
      fn(config, out, log);
      return;
    }
  }
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, fn] : commands()) v.push_back(n);
    return v;
  }();
  return names;
}

std::string version_string() { return IRFFLOW_VERSION; }

}  // namespace irfflow
