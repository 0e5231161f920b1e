#ifndef MIXPRIOR_SPECIAL_HPP_
#define MIXPRIOR_SPECIAL_HPP_

#include <cstdint>

namespace mixprior {

// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

// log C(n, k) for 0 <= k <= n.
double log_choose(std::int64_t n, std::int64_t k);

// Regularized incomplete beta function I_x(a, b), evaluated with the
// modified Lentz continued fraction on whichever of I_x(a,b) or
// 1 - I_{1-x}(b,a) converges faster.  Relative accuracy is near 1e-14
// for moderate shapes.  x is clamped to [0, 1].
double regularized_incomplete_beta(double x, double a, double b);

double beta_cdf(double x, double a, double b);
double log_beta_pdf(double x, double a, double b);

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);
double normal_pdf(double x, double mu = 0.0, double sigma = 1.0);

// Student-t CDF with `df` degrees of freedom, location and scale.
double student_t_cdf(double x, double df, double location = 0.0,
                     double scale = 1.0);

// log of the binomial pmf C(n,r) theta^r (1-theta)^(n-r).
double log_binomial_pmf(std::int64_t r, std::int64_t n, double theta);

}  // namespace mixprior

#endif  // MIXPRIOR_SPECIAL_HPP_
