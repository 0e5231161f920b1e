#ifndef MIXPRIOR_GIBBS_HPP_
#define MIXPRIOR_GIBBS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mixprior/conjugate.hpp"
#include "mixprior/mixture.hpp"

namespace mixprior {

struct FixedWeights {
  std::vector<double> weights;
  bool operator==(const FixedWeights &) const = default;
};

struct DirichletWeights {
  std::vector<double> concentration;
  bool operator==(const DirichletWeights &) const = default;
};

using WeightPrior = std::variant<FixedWeights, DirichletWeights>;

std::size_t dimension(const WeightPrior &prior);

// Prior mean of the weights; for fixed weights, the weights themselves.
std::vector<double> expected_weights(const WeightPrior &prior);

// Throws std::invalid_argument for non-simplex fixed weights or
// nonpositive concentrations.
void validate(const WeightPrior &prior);

// Latent allocation model: Z ~ Cat(pi), theta | Z = i ~ components[i],
// r | theta ~ Bin(n, theta).  Each component keeps its own theta node.
struct LatentModelSpec {
  std::vector<Component> components;
  WeightPrior weight_prior;
  BinomialData data;

  void validate() const;
};

struct GibbsConfig {
  std::size_t burn_in = 50'000;
  std::size_t iterations = 500'000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  // Independent random stream for concurrent chains sharing a seed.
  std::uint64_t stream = 0;

  static constexpr std::size_t kMinIterationsForSummary = 1000;
  bool operator==(const GibbsConfig &) const = default;
};

struct ChainOutput {
  std::vector<double> theta_draws;
  // Component labels on the 1..k scale.
  std::vector<int> z_draws;
  // One series per component; present iff the weight prior is Dirichlet.
  std::optional<std::vector<std::vector<double>>> pi_draws;
  DistributionSummary theta_summary{};
  DistributionSummary z_summary{};
  std::vector<DistributionSummary> pi_summaries;
  double z_mean = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const { return theta_draws.size(); }
  bool operator==(const ChainOutput &) const = default;
};

ChainOutput gibbs_run(const LatentModelSpec &spec, const GibbsConfig &cfg);

// Empirical mean, sd (n - 1 denominator) and type-7 quantiles.
DistributionSummary summarize_draws(std::span<const double> draws);

struct SummaryRow {
  std::string label;
  DistributionSummary summary;
};

// Rows for theta, Z and (when present) each pi_i.  Requires at least
// GibbsConfig::kMinIterationsForSummary retained draws.
std::vector<SummaryRow> chain_summary(const ChainOutput &c);

struct Quantity {
  enum class Kind { kTheta, kZ, kPi };
  Kind kind = Kind::kTheta;
  std::size_t component = 0;  // used for kPi, 0-based
};

// Draws of a monitored quantity as doubles.
std::vector<double> series(const ChainOutput &c, Quantity q);

// Batch-means Monte Carlo standard error with floor(sqrt(n)) batches of
// size floor(sqrt(n)).
double batch_means_mcse(std::span<const double> draws);
double mcse(const ChainOutput &c, Quantity q);

// Fraction of retained draws with Z = component (1-based).
double z_frequency(const ChainOutput &c, int component);

// One record per retained draw: iter,theta,z[,pi_1..pi_k] with header.
void write_chain_csv(std::ostream &out, const ChainOutput &c,
                     std::size_t burn_in = 0, std::size_t thin = 1);

}  // namespace mixprior

#endif  // MIXPRIOR_GIBBS_HPP_
