#ifndef MIXPRIOR_MULTI_LATENT_HPP_
#define MIXPRIOR_MULTI_LATENT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mixprior/mixture.hpp"

namespace mixprior {

// Latent indicators Z_1..Z_m select F1 (Z_j = 1) or F2 (Z_j = 0) for each of
// m parameters.  Three versions of the indicator prior:
//
//   IndependentFixed:  Z_j ~ Bern(p_j), p_j fixed
//   IndependentBeta:   Z_j ~ Bern(pi_j), pi_j ~ Beta(a_j, b_j) independently
//   SharedBeta:        Z_j ~ Bern(pi),   pi ~ Beta(a, b) shared by all j
//
// Only SharedBeta induces dependence between the indicators.
struct IndependentFixed {
  std::vector<double> p;
  bool operator==(const IndependentFixed &) const = default;
};

struct IndependentBeta {
  std::vector<double> a;
  std::vector<double> b;
  bool operator==(const IndependentBeta &) const = default;
};

struct SharedBeta {
  double a;
  double b;
  bool operator==(const SharedBeta &) const = default;
};

using ShrinkageVersion = std::variant<IndependentFixed, IndependentBeta, SharedBeta>;

struct ComponentPair {
  Component f1;
  Component f2;
  bool operator==(const ComponentPair &) const = default;
};

struct ShrinkageSpec {
  std::size_t m = 1;
  ShrinkageVersion version = IndependentFixed{{0.5}};
  // Needed for the parameter-level (theta) moments and simulation only.
  std::optional<ComponentPair> components;

  // Throws std::invalid_argument on m = 0, per-parameter vectors whose length
  // differs from m, probabilities outside [0, 1] or nonpositive
  // concentrations.
  void validate() const;
  bool operator==(const ShrinkageSpec &) const = default;
};

// Moments of the indicators for a pair (Z_j, Z_k).  Cross moments are empty
// when m = 1.
struct LatentMoments {
  double mean_z = 0.0;
  double var_z = 0.0;
  std::optional<double> cov_z;
  std::optional<double> cor_z;
  // P(Z_j = 1 | Z_k = 0) and P(Z_j = 1 | Z_k = 1).
  std::optional<double> conditional_z1_given_z0;
  std::optional<double> conditional_z1_given_z1;
};

struct ThetaMoments {
  double mean_theta = 0.0;
  double var_theta = 0.0;
  std::optional<double> cov_theta;
  std::optional<double> cor_theta;
};

LatentMoments latent_moments_analytic(const ShrinkageSpec &spec,
                                      std::size_t j = 0, std::size_t k = 1);

// Requires spec.components.  Throws std::invalid_argument otherwise.
ThetaMoments theta_moments_analytic(const ShrinkageSpec &spec,
                                    std::size_t j = 0, std::size_t k = 1);

// Independent Beta-distributed indicator probabilities are equivalent to
// fixed probabilities p_j = a_j / (a_j + b_j).
IndependentFixed equivalence_1a_1b(std::span<const double> a,
                                   std::span<const double> b);

// Marginal P(Z_j = 1) for every j.
std::vector<double> marginal_inclusion(const ShrinkageSpec &spec);

enum class SumDistributionKind { kBinomial, kBetaBinomial, kPoissonBinomial };

struct SumDistribution {
  SumDistributionKind kind;
  std::vector<double> pmf;  // over 0..m
};

const char *to_string(SumDistributionKind kind);

// Distribution of sum_j Z_j.  Unequal independent probabilities give a
// Poisson-binomial pmf by iterative convolution.
SumDistribution latent_sum_pmf(const ShrinkageSpec &spec);

double binomial_pmf(std::int64_t k, std::int64_t m, double p);
double beta_binomial_pmf(std::int64_t k, std::int64_t m, double a, double b);

constexpr std::size_t kMaxEnumeratedParameters = 20;

// Probability of each of the 2^m inclusion patterns, indexed by bitmask
// (bit j set iff Z_{j+1} = 1).  Throws std::length_error for m > 20.
std::vector<double> model_probabilities(const ShrinkageSpec &spec);

//===========================================================================
// Simulation.

struct LatentMomentErrors {
  double mean_z = 0.0;
  double var_z = 0.0;
  double cov_z = 0.0;
  double cor_z = 0.0;
  double conditional_z1_given_z0 = 0.0;
  double conditional_z1_given_z1 = 0.0;
};

struct ThetaMomentErrors {
  double mean_theta = 0.0;
  double var_theta = 0.0;
  double cov_theta = 0.0;
  double cor_theta = 0.0;
};

struct ShrinkageSimulation {
  std::size_t n_draws = 0;
  // Moments of the first pair (Z_1, Z_2) and (theta_1, theta_2).
  LatentMoments latent;
  LatentMomentErrors latent_se;
  std::optional<ThetaMoments> theta;
  ThetaMomentErrors theta_se;
  // Relative frequencies of sum_j Z_j over 0..m, with standard errors.
  std::vector<double> sum_frequencies;
  std::vector<double> sum_se;
};

constexpr std::size_t kSimulationBatches = 64;
constexpr std::size_t kMinSimulationDraws = 10'000;

// Joint prior draws (pi, Z_1..Z_m, theta_1..theta_m).  The draws are split
// into kSimulationBatches batches, each with its own random stream, so the
// result does not depend on `workers`.  Standard errors are the spread of the
// per-batch estimates divided by sqrt(batches).  workers = 0 picks the
// hardware concurrency.
ShrinkageSimulation simulate_shrinkage(const ShrinkageSpec &spec,
                                       std::size_t n_draws, std::uint64_t seed,
                                       unsigned workers = 0);

//===========================================================================
// Normal prior with an inverse-Gamma variance: theta | s2 ~ N(mu, s2),
// s2 ~ InvGamma(shape, scale).  Marginally theta is Student-t with 2 * shape
// degrees of freedom, location mu and scale sqrt(scale / shape).

std::vector<double> draw_normal_inverse_gamma(double mu, double shape,
                                              double scale, std::size_t n,
                                              std::uint64_t seed);

// Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|.
double ks_distance(std::span<const double> draws,
                   const std::function<double(double)> &cdf);

struct MarginalCheck {
  double ks_distance = 0.0;
  double degrees_of_freedom = 0.0;
  double location = 0.0;
  double scale = 0.0;
  std::size_t n_draws = 0;
};

MarginalCheck marginal_extension_check(double mu, double shape, double scale,
                                       std::size_t n_draws, std::uint64_t seed);

}  // namespace mixprior

#endif  // MIXPRIOR_MULTI_LATENT_HPP_
