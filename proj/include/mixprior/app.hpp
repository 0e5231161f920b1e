#ifndef MIXPRIOR_APP_HPP_
#define MIXPRIOR_APP_HPP_

#include <optional>
#include <string>

#include "mixprior/config.hpp"
#include "mixprior/report.hpp"

namespace mixprior {

struct RunOptions {
  // Gibbs only: write each chain as CSV.  With several analyses the files are
  // named <stem>.<N><ext>.
  std::optional<std::string> dump_chain;
};

// Dispatches a validated configuration to the engines and collects the
// result tables.  Engine errors propagate as exceptions.
ResultDocument run(const AnalysisConfig &config, const RunOptions &options = {});

// Path of the chain dump for analysis `index` (1-based) of `count`.
std::string chain_dump_path(const std::string &base, std::size_t index,
                            std::size_t count);

}  // namespace mixprior

#endif  // MIXPRIOR_APP_HPP_
