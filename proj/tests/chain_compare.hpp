// Helpers for comparing Gibbs output against exact values or against another
// chain, in units of batch-means MCSE.

#ifndef MIXPRIOR_TESTS_CHAIN_COMPARE_HPP_
#define MIXPRIOR_TESTS_CHAIN_COMPARE_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "mixprior/gibbs.hpp"

namespace mixprior::testing {

struct Discrepancy {
  std::string what;
  double difference;
  double mcse;
  double z() const { return mcse > 0.0 ? std::fabs(difference) / mcse : (difference == 0.0 ? 0.0 : INFINITY); }
};

inline std::vector<double> indicator_below(const std::vector<double> &draws,
                                           double cut) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (double x : draws) out.push_back(x <= cut ? 1.0 : 0.0);
  return out;
}

inline double mean_of(const std::vector<double> &x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Theta mean, second moment and the 2.5%, 50%, 97.5% quantiles of chain `a`
// compared with chain `b`.  Quantiles are compared on the probability scale:
// the fraction of each chain at or below a's empirical quantile.
inline std::vector<Discrepancy> compare_theta(const ChainOutput &a,
                                              const ChainOutput &b) {
  std::vector<Discrepancy> out;
  auto combined = [](double x, double y) { return std::sqrt(x * x + y * y); };

  out.push_back({"mean", a.theta_summary.mean - b.theta_summary.mean,
                 combined(batch_means_mcse(a.theta_draws),
                          batch_means_mcse(b.theta_draws))});

  std::vector<double> sq_a;
  std::vector<double> sq_b;
  for (double x : a.theta_draws) sq_a.push_back(x * x);
  for (double x : b.theta_draws) sq_b.push_back(x * x);
  out.push_back({"second moment", mean_of(sq_a) - mean_of(sq_b),
                 combined(batch_means_mcse(sq_a), batch_means_mcse(sq_b))});

  const double cuts[] = {a.theta_summary.q025, a.theta_summary.median,
                         a.theta_summary.q975};
  const char *names[] = {"2.5%", "median", "97.5%"};
  for (int i = 0; i < 3; ++i) {
    const auto ia = indicator_below(a.theta_draws, cuts[i]);
    const auto ib = indicator_below(b.theta_draws, cuts[i]);
    out.push_back({names[i], mean_of(ia) - mean_of(ib),
                   combined(batch_means_mcse(ia), batch_means_mcse(ib))});
  }
  return out;
}

}  // namespace mixprior::testing

#endif  // MIXPRIOR_TESTS_CHAIN_COMPARE_HPP_
