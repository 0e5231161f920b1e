#include "mixprior/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mixprior {

namespace {

constexpr int kMaxContinuedFractionTerms = 10000;
constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;

// Continued fraction for I_x(a,b), valid (fast) for x < (a+1)/(a+b+2).
double incomplete_beta_cf(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) {
    throw std::domain_error("log_choose requires 0 <= k <= n");
  }
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("incomplete beta requires a > 0 and b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * incomplete_beta_cf(x, a, b) / a;
  }
  return 1.0 - std::exp(log_front) * incomplete_beta_cf(1.0 - x, b, a) / b;
}

double beta_cdf(double x, double a, double b) {
  return regularized_incomplete_beta(x, a, b);
}

double log_beta_pdf(double x, double a, double b) {
  if (x < 0.0 || x > 1.0) return -std::numeric_limits<double>::infinity();
  // Skip exponents of zero so the endpoints of Beta(1, b) avoid 0 * log(0).
  double value = -log_beta(a, b);
  if (a != 1.0) value += (a - 1.0) * std::log(x);
  if (b != 1.0) value += (b - 1.0) * std::log1p(-x);
  return value;
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) /
         (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double student_t_cdf(double x, double df, double location, double scale) {
  const double t = (x - location) / scale;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  const double tail =
      0.5 * regularized_incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
  return t > 0.0 ? 1.0 - tail : tail;
}

double log_binomial_pmf(std::int64_t r, std::int64_t n, double theta) {
  double value = log_choose(n, r);
  if (r > 0) value += static_cast<double>(r) * std::log(theta);
  if (n - r > 0) value += static_cast<double>(n - r) * std::log1p(-theta);
  return value;
}

}  // namespace mixprior
