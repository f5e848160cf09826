// irfflow run <subcommand> <config>
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "irfflow/errors.hpp"
#include "irfflow/experiments.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

std::string subcommand_list() {
  std::string s;
  for (const auto& n : irfflow::subcommand_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact variational flows from involutive MCMC kernels"};
  app.set_version_flag("--version", irfflow::version_string());
  app.require_subcommand(1);

  std::string subcommand;
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Run an experiment and write its CSV");
  run->add_option("subcommand", subcommand, "One of: " + subcommand_list())->required();
  run->add_option("config", config_path, "key = value experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    const irfflow::Config config = irfflow::Config::load(config_path);
    const std::string output = config.get_string("output", "");
    if (output.empty()) {
      irfflow::run_subcommand(subcommand, config, std::cout, std::cerr);
    } else {
      // write to a temporary first so a failed run never leaves a partial file
      const std::string tmp = output + ".partial";
      {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw irfflow::ConfigError("cannot open output file " + output);
        irfflow::run_subcommand(subcommand, config, out, std::cerr);
      }
      std::filesystem::rename(tmp, output);
    }
  } catch (const irfflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const irfflow::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
