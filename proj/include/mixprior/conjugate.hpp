#ifndef MIXPRIOR_CONJUGATE_HPP_
#define MIXPRIOR_CONJUGATE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mixprior/mixture.hpp"

namespace mixprior {

// r responders out of n patients.
struct BinomialData {
  std::int64_t r;
  std::int64_t n;

  // Throws std::invalid_argument unless 0 <= r <= n and n >= 1.
  void validate() const;
  bool operator==(const BinomialData &) const = default;
};

struct ConjugateUpdateResult {
  Mixture posterior;
  std::vector<double> prior_weights;
  // Prior predictive probability of the data under each component,
  // binomial coefficient included.
  std::vector<double> marginal_likelihoods;
  std::vector<double> log_marginal_likelihoods;
  std::vector<double> posterior_weights;

  bool operator==(const ConjugateUpdateResult &) const = default;
};

// Beta-binomial prior predictive probability
//   C(n,r) B(alpha + r, beta + n - r) / B(alpha, beta).
double beta_binomial_marglik(const Beta &prior, const BinomialData &data);
double log_beta_binomial_marglik(const Beta &prior, const BinomialData &data);

// Conjugate update of a mixture of Betas.  Each component becomes
// Beta(alpha + r, beta + n - r) and the weights are reweighted by the
// component predictive probabilities; the normalization runs in log space.
// Throws std::invalid_argument if a component is not a Beta.
ConjugateUpdateResult posterior_update(const Mixture &prior,
                                       const BinomialData &data);

// Fixed-weight mixture equal to the marginal prior when the weights are
// Dirichlet(concentration): w_i = a_i / sum_j a_j.
Mixture marginal_prior_of_uncertain_weights(
    std::span<const Component> components,
    std::span<const double> concentration);

// Normalized Dirichlet mean a / sum(a).
std::vector<double> dirichlet_mean(std::span<const double> concentration);

}  // namespace mixprior

#endif  // MIXPRIOR_CONJUGATE_HPP_
