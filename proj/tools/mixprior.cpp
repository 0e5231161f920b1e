// mixprior: command-line front end for the mixture-prior engines.
//
//   mixprior <update|gibbs|shrinkage|marginal-check> --config <path>
//            [--seed N] [--out <path>] [--full-precision] [--dump-chain <path>]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mixprior/app.hpp"
#include "mixprior/config.hpp"
#include "mixprior/report.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Bayesian mixture-prior inference engine", "mixprior"};
  app.set_version_flag("--version", mixprior::kEngineVersion);

  std::string command_name;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::optional<std::string> dump_chain;
  bool full_precision = false;

  app.add_option("command", command_name, "Analysis to run")
      ->required()
      ->check(CLI::IsMember({"update", "gibbs", "shrinkage", "marginal-check"}));
  app.add_option("--config,-c", config_path, "Analysis configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--out,-o", out_path,
                 "Write the machine-readable result document here");
  app.add_flag("--full-precision", full_precision,
               "Print 12 significant digits instead of 3 decimals");
  app.add_option("--dump-chain", dump_chain,
                 "gibbs: write retained draws as CSV");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  try {
    auto config =
        mixprior::parse_config(text.str(), mixprior::parse_command(command_name));
    if (seed) config.seed = *seed;
    if (out_path) config.output_path = *out_path;
    if (dump_chain && config.command() != mixprior::Command::kGibbs) {
      std::cerr << "error: --dump-chain only applies to gibbs\n";
      return 1;
    }

    const auto doc = mixprior::run(config, {dump_chain});
    for (const auto &w : doc.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << mixprior::format_text(doc, full_precision
                                                ? mixprior::Precision::kFull
                                                : mixprior::Precision::kDisplay);
    if (config.output_path) {
      std::ofstream out(*config.output_path);
      if (!out) {
        std::cerr << "error: cannot write " << *config.output_path << '\n';
        return 1;
      }
      out << mixprior::format_csv(doc);
    }
  } catch (const mixprior::ConfigError &e) {
    for (const auto &issue : e.issues()) {
      std::cerr << config_path << ": " << issue.path << ": " << issue.message
                << '\n';
    }
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
