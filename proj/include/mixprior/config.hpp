#ifndef MIXPRIOR_CONFIG_HPP_
#define MIXPRIOR_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mixprior/conjugate.hpp"
#include "mixprior/gibbs.hpp"
#include "mixprior/mixture.hpp"
#include "mixprior/multi_latent.hpp"

namespace mixprior {

enum class Command { kUpdate, kGibbs, kShrinkage, kMarginalCheck };

const char *to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

struct UpdatePayload {
  std::vector<Component> components;
  WeightPrior weights;
  BinomialData data{0, 1};
  bool operator==(const UpdatePayload &) const = default;
};

struct GibbsPayload {
  std::vector<Component> components;
  BinomialData data{0, 1};
  std::size_t burn_in = 50'000;
  std::size_t iterations = 500'000;
  std::size_t thin = 1;
  // One chain per entry, reported as p[1], p[2], ... and Z[1], Z[2], ...
  std::vector<WeightPrior> analyses;
  bool operator==(const GibbsPayload &) const = default;
};

struct ShrinkagePayload {
  ShrinkageSpec spec;
  std::size_t draws = 0;  // 0 disables the simulation check
  bool patterns = false;
  bool operator==(const ShrinkagePayload &) const = default;
};

struct MarginalPayload {
  double mu = 0.0;
  double shape = 2.0;
  double scale = 2.0;
  std::size_t draws = 1'000'000;
  bool operator==(const MarginalPayload &) const = default;
};

using Payload =
    std::variant<UpdatePayload, GibbsPayload, ShrinkagePayload, MarginalPayload>;

struct AnalysisConfig {
  Payload payload;
  std::uint64_t seed = 1;
  std::optional<std::string> output_path;

  Command command() const { return static_cast<Command>(payload.index()); }
  bool operator==(const AnalysisConfig &) const = default;
};

struct ConfigIssue {
  std::string path;
  std::string message;
};

// Thrown by parse_config with every problem found, each tagged with the
// dotted path of the offending field (e.g. "prior.weights").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue> &issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// Parses the sectioned key = value format documented in docs/config.md.
// When `expected` is given, the file's `command` key may be omitted; if both
// are present they must agree.
AnalysisConfig parse_config(std::string_view text,
                            std::optional<Command> expected = std::nullopt);

// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const AnalysisConfig &config);

// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

}  // namespace mixprior

#endif  // MIXPRIOR_CONFIG_HPP_
