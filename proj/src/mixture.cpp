#include "mixprior/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mixprior/random.hpp"
#include "mixprior/special.hpp"

namespace mixprior {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNormalSupportSds = 40.0;
constexpr int kMaxBisections = 400;

}  // namespace

Component make_beta(double alpha, double beta) {
  Component c = Beta{alpha, beta};
  validate(c);
  return c;
}

Component make_normal(double mu, double sigma2) {
  Component c = Normal{mu, sigma2};
  validate(c);
  return c;
}

Component make_uniform(double lo, double hi) {
  Component c = Uniform{lo, hi};
  validate(c);
  return c;
}

Component make_point_mass(double location) {
  Component c = PointMass{location};
  validate(c);
  return c;
}

void validate(const Component &c) {
  std::visit(
      Overloaded{
          [](const Beta &b) {
            if (!(b.alpha > 0.0) || !(b.beta > 0.0) || !std::isfinite(b.alpha) ||
                !std::isfinite(b.beta)) {
              throw std::invalid_argument(
                  "Beta shape parameters must be positive and finite");
            }
          },
          [](const Normal &n) {
            if (!std::isfinite(n.mu) || !(n.sigma2 > 0.0) ||
                !std::isfinite(n.sigma2)) {
              throw std::invalid_argument(
                  "Normal needs a finite mean and positive finite variance");
            }
          },
          [](const Uniform &u) {
            if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo < u.hi)) {
              throw std::invalid_argument(
                  "Uniform bounds must be finite with lo < hi");
            }
          },
          [](const PointMass &p) {
            if (!std::isfinite(p.location)) {
              throw std::invalid_argument("point mass location must be finite");
            }
          }},
      c);
}

bool is_beta(const Component &c) { return std::holds_alternative<Beta>(c); }

bool has_density(const Component &c) {
  return !std::holds_alternative<PointMass>(c);
}

std::string describe(const Component &c) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Beta &b) {
                   out << "Beta(" << b.alpha << ", " << b.beta << ")";
                 },
                 [&](const Normal &n) {
                   out << "Normal(" << n.mu << ", " << n.sigma2 << ")";
                 },
                 [&](const Uniform &u) {
                   out << "Uniform(" << u.lo << ", " << u.hi << ")";
                 },
                 [&](const PointMass &p) {
                   out << "PointMass(" << p.location << ")";
                 }},
             c);
  return out.str();
}

double component_mean(const Component &c) {
  return std::visit(
      Overloaded{[](const Beta &b) { return b.alpha / (b.alpha + b.beta); },
                 [](const Normal &n) { return n.mu; },
                 [](const Uniform &u) { return 0.5 * (u.lo + u.hi); },
                 [](const PointMass &p) { return p.location; }},
      c);
}

double component_variance(const Component &c) {
  return std::visit(
      Overloaded{[](const Beta &b) {
                   const double s = b.alpha + b.beta;
                   return b.alpha * b.beta / (s * s * (s + 1.0));
                 },
                 [](const Normal &n) { return n.sigma2; },
                 [](const Uniform &u) {
                   const double w = u.hi - u.lo;
                   return w * w / 12.0;
                 },
                 [](const PointMass &) { return 0.0; }},
      c);
}

double component_pdf(const Component &c, double x) {
  return std::visit(
      Overloaded{
          [x](const Beta &b) {
            if (x < 0.0 || x > 1.0) return 0.0;
            return std::exp(log_beta_pdf(x, b.alpha, b.beta));
          },
          [x](const Normal &n) {
            return normal_pdf(x, n.mu, std::sqrt(n.sigma2));
          },
          [x](const Uniform &u) {
            return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo);
          },
          [](const PointMass &) -> double {
            throw std::domain_error("a point mass has no density");
          }},
      c);
}

double component_cdf(const Component &c, double x) {
  return std::visit(
      Overloaded{[x](const Beta &b) { return beta_cdf(x, b.alpha, b.beta); },
                 [x](const Normal &n) {
                   return normal_cdf(x, n.mu, std::sqrt(n.sigma2));
                 },
                 [x](const Uniform &u) {
                   if (x <= u.lo) return 0.0;
                   if (x >= u.hi) return 1.0;
                   return (x - u.lo) / (u.hi - u.lo);
                 },
                 [x](const PointMass &p) { return x < p.location ? 0.0 : 1.0; }},
      c);
}

double sample_component(const Component &c, Rng &rng) {
  return std::visit(
      Overloaded{[&](const Beta &b) { return rng.beta(b.alpha, b.beta); },
                 [&](const Normal &n) {
                   return n.mu + std::sqrt(n.sigma2) * rng.normal();
                 },
                 [&](const Uniform &u) {
                   return u.lo + (u.hi - u.lo) * rng.uniform();
                 },
                 [](const PointMass &p) { return p.location; }},
      c);
}

std::pair<double, double> support(const Component &c) {
  return std::visit(
      Overloaded{[](const Beta &) { return std::pair{0.0, 1.0}; },
                 [](const Normal &n) {
                   const double half = kNormalSupportSds * std::sqrt(n.sigma2);
                   return std::pair{n.mu - half, n.mu + half};
                 },
                 [](const Uniform &u) { return std::pair{u.lo, u.hi}; },
                 [](const PointMass &p) {
                   return std::pair{p.location, p.location};
                 }},
      c);
}

//===========================================================================

Mixture::Mixture(std::vector<Component> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) {
    throw std::invalid_argument("a mixture needs at least one component");
  }
  if (components_.size() != weights_.size()) {
    throw std::invalid_argument(
        "mixture has " + std::to_string(components_.size()) +
        " components but " + std::to_string(weights_.size()) + " weights");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("mixture weights must lie in [0, 1]");
    }
    total += w;
  }
  if (std::fabs(total - 1.0) > kWeightTolerance) {
    std::ostringstream msg;
    msg << "weights sum to " << total;
    throw std::invalid_argument(msg.str());
  }
  for (const auto &c : components_) validate(c);
}

Mixture::Mixture(Component component)
    : Mixture(std::vector<Component>{std::move(component)},
              std::vector<double>{1.0}) {}

double mixture_pdf(const Mixture &m, double x) {
  for (const auto &c : m.components()) {
    if (!has_density(c)) {
      throw std::domain_error(
          "mixture density is undefined with a point-mass component");
    }
  }
  double value = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights()[i] > 0.0) {
      value += m.weights()[i] * component_pdf(m.components()[i], x);
    }
  }
  return value;
}

double mixture_cdf(const Mixture &m, double x) {
  double value = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights()[i] > 0.0) {
      value += m.weights()[i] * component_cdf(m.components()[i], x);
    }
  }
  return std::clamp(value, 0.0, 1.0);
}

double mixture_quantile(const Mixture &m, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("quantile level must lie in (0, 1)");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights()[i] <= 0.0) continue;
    const auto [a, b] = support(m.components()[i]);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  // Step below the lowest support point so an atom there is not bracketed
  // on the wrong side.
  lo -= std::max(1.0, std::fabs(lo));
  if (!(mixture_cdf(m, lo) < q) || !(mixture_cdf(m, hi) >= q)) {
    throw std::runtime_error("could not bracket the requested quantile");
  }
  // Invariant: cdf(lo) < q <= cdf(hi).
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (mixture_cdf(m, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Moments mixture_moments(const Mixture &m) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = m.weights()[i];
    if (w <= 0.0) continue;
    const double mu = component_mean(m.components()[i]);
    mean += w * mu;
    second += w * (component_variance(m.components()[i]) + mu * mu);
  }
  return {mean, std::max(0.0, second - mean * mean)};
}

double sample_one(const Mixture &m, Rng &rng) {
  const std::size_t i = m.size() == 1 ? 0 : rng.categorical(m.weights());
  return sample_component(m.components()[i], rng);
}

std::vector<double> sample(const Mixture &m, std::uint64_t seed,
                           std::size_t n) {
  Rng rng(seed);
  std::vector<double> draws(n);
  for (auto &x : draws) x = sample_one(m, rng);
  return draws;
}

DistributionSummary summarize(const Mixture &m) {
  const Moments mo = mixture_moments(m);
  return {mo.mean, std::sqrt(mo.variance), mixture_quantile(m, 0.025),
          mixture_quantile(m, 0.5), mixture_quantile(m, 0.975)};
}

}  // namespace mixprior
