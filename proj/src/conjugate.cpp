#include "mixprior/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mixprior/special.hpp"

namespace mixprior {

void BinomialData::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (r < 0) throw std::invalid_argument("r must be nonnegative");
  if (r > n) throw std::invalid_argument("r exceeds n");
}

double log_beta_binomial_marglik(const Beta &prior, const BinomialData &data) {
  data.validate();
  const double r = static_cast<double>(data.r);
  const double failures = static_cast<double>(data.n - data.r);
  return log_choose(data.n, data.r) +
         log_beta(prior.alpha + r, prior.beta + failures) -
         log_beta(prior.alpha, prior.beta);
}

double beta_binomial_marglik(const Beta &prior, const BinomialData &data) {
  return std::exp(log_beta_binomial_marglik(prior, data));
}

ConjugateUpdateResult posterior_update(const Mixture &prior,
                                       const BinomialData &data) {
  data.validate();
  const std::size_t k = prior.size();
  std::vector<double> log_marglik(k);
  std::vector<double> log_joint(k);
  std::vector<Component> posterior_components;
  posterior_components.reserve(k);

  for (std::size_t i = 0; i < k; ++i) {
    const auto *beta = std::get_if<Beta>(&prior.components()[i]);
    if (beta == nullptr) {
      throw std::invalid_argument("component " + std::to_string(i + 1) +
                                  " is not a Beta; conjugate update needs "
                                  "an all-Beta mixture");
    }
    log_marglik[i] = log_beta_binomial_marglik(*beta, data);
    const double w = prior.weights()[i];
    log_joint[i] = w > 0.0 ? std::log(w) + log_marglik[i]
                           : -std::numeric_limits<double>::infinity();
    posterior_components.push_back(
        Beta{beta->alpha + static_cast<double>(data.r),
             beta->beta + static_cast<double>(data.n - data.r)});
  }

  const double top = *std::max_element(log_joint.begin(), log_joint.end());
  if (!std::isfinite(top)) {
    throw std::runtime_error("all posterior component weights underflowed");
  }
  std::vector<double> posterior_weights(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    posterior_weights[i] = std::exp(log_joint[i] - top);
    total += posterior_weights[i];
  }
  for (auto &w : posterior_weights) w /= total;

  std::vector<double> marglik(k);
  std::transform(log_marglik.begin(), log_marglik.end(), marglik.begin(),
                 [](double v) { return std::exp(v); });

  return ConjugateUpdateResult{
      Mixture(std::move(posterior_components), posterior_weights),
      prior.weights(), std::move(marglik), std::move(log_marglik),
      posterior_weights};
}

std::vector<double> dirichlet_mean(std::span<const double> concentration) {
  double total = 0.0;
  for (double a : concentration) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument(
          "Dirichlet concentrations must be positive and finite");
    }
    total += a;
  }
  std::vector<double> mean(concentration.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    mean[i] = concentration[i] / total;
  }
  return mean;
}

Mixture marginal_prior_of_uncertain_weights(
    std::span<const Component> components,
    std::span<const double> concentration) {
  if (components.size() != concentration.size()) {
    throw std::invalid_argument(
        "need one Dirichlet concentration per component");
  }
  return Mixture(std::vector<Component>(components.begin(), components.end()),
                 dirichlet_mean(concentration));
}

}  // namespace mixprior
