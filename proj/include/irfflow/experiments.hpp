#ifndef IRFFLOW_EXPERIMENTS_HPP
#define IRFFLOW_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "irfflow/estimators.hpp"
#include "irfflow/flows.hpp"
#include "irfflow/reference.hpp"

namespace irfflow {

/// Declarative key = value experiment file. '#' starts a comment; list values
/// are comma separated. Unknown keys are rejected.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  double get_positive(const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  std::vector<std::string> get_list(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::string& fallback) const;
  std::vector<std::size_t> get_counts(const std::string& key, const std::string& fallback) const;

  /// Sorted "key=value" lines; the input to hash().
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Kernel description "name:eps[:leapfrog]"; `uncorrected_hmc` is accepted
/// and reported through the `uncorrected` flag.
struct KernelChoice {
  KernelConfig config;
  bool uncorrected = false;
  std::string label;
};
KernelChoice parse_kernel_choice(std::string_view text);

/// q0 for a target: loaded from the `reference` file when given (its target
/// must match), otherwise fitted with the advi_* keys.
MeanFieldGaussian reference_for(const Config& config, const Target& target);

struct TvRun {
  double tv = 0.0;
  std::size_t n_nonfinite = 0;
};

/// TV of `samples` flow draws against the histogram; non-finite draws count
/// as mass outside the grid.
TvRun tv_run(const MixFlow& flow, const TargetHistogram& hist, std::size_t samples,
             std::uint64_t seed, std::size_t workers);

/// Seeds used by a run: stream and sample seeds derived from the run seed.
std::uint64_t stream_seed_of(std::uint64_t run_seed);
std::uint64_t sample_seed_of(std::uint64_t run_seed);

struct StepSearch {
  double eps = 0.0;
  double acceptance = 0.0;
  bool monotone = true;
  std::vector<std::pair<double, double>> probes;  ///< (eps, acceptance) in probe order
};

/// Bisection in log eps on [lo, hi] for acceptance(eps) = goal, stopping
/// within `tol` or after `max_probes` evaluations. When the probes show the
/// acceptance rising with eps by more than 0.05 the search is flagged
/// non-monotone; the probe closest to the goal is returned either way.
StepSearch bisect_step(const std::function<double(double)>& acceptance, double lo, double hi,
                       double goal, double tol, std::size_t max_probes);

/// Runs one subcommand and writes its CSV to `out`. Warnings go to `log`.
void run_subcommand(std::string_view name, const Config& config, std::ostream& out,
                    std::ostream& log);

/// Names accepted by run_subcommand.
const std::vector<std::string>& subcommand_names();

/// Version string stamped into CSV rows.
std::string version_string();

}  // namespace irfflow

#endif  // IRFFLOW_EXPERIMENTS_HPP
