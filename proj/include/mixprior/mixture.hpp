#ifndef MIXPRIOR_MIXTURE_HPP_
#define MIXPRIOR_MIXTURE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mixprior {

class Rng;

//===========================================================================
// Component families.  Parameters are validated by the factory functions
// below; aggregate construction is left open so the types stay literal
// values that compare with ==.
struct Beta {
  double alpha;
  double beta;
  bool operator==(const Beta &) const = default;
};

// Normal parameterized by mean and variance.
struct Normal {
  double mu;
  double sigma2;
  bool operator==(const Normal &) const = default;
};

struct Uniform {
  double lo;
  double hi;
  bool operator==(const Uniform &) const = default;
};

// An atom.  Has a CDF and can be sampled, but no density.
struct PointMass {
  double location;
  bool operator==(const PointMass &) const = default;
};

using Component = std::variant<Beta, Normal, Uniform, PointMass>;

Component make_beta(double alpha, double beta);
Component make_normal(double mu, double sigma2);
Component make_uniform(double lo, double hi);
Component make_point_mass(double location);

// Throws std::invalid_argument if the component's parameters are out of
// range (nonpositive shapes or variance, unordered uniform bounds,
// non-finite values).
void validate(const Component &c);

bool is_beta(const Component &c);
bool has_density(const Component &c);

// Human-readable form, e.g. "Beta(11, 32)".
std::string describe(const Component &c);

double component_mean(const Component &c);
double component_variance(const Component &c);
double component_pdf(const Component &c, double x);
double component_cdf(const Component &c, double x);
double sample_component(const Component &c, Rng &rng);

// Interval outside of which the component has no mass (or negligible mass,
// for the normal: forty standard deviations).
std::pair<double, double> support(const Component &c);

//===========================================================================
// A finite mixture sum_i w_i f_i.  Weights must lie in [0, 1] and sum to one
// within kWeightTolerance; the constructor rejects anything else.
class Mixture {
 public:
  static constexpr double kWeightTolerance = 1e-12;

  Mixture(std::vector<Component> components, std::vector<double> weights);

  // Single-component mixture with weight one.
  explicit Mixture(Component component);

  const std::vector<Component> &components() const { return components_; }
  const std::vector<double> &weights() const { return weights_; }
  std::size_t size() const { return components_.size(); }

  bool operator==(const Mixture &) const = default;

 private:
  std::vector<Component> components_;
  std::vector<double> weights_;
};

struct Moments {
  double mean;
  double variance;
};

struct DistributionSummary {
  double mean;
  double sd;
  double q025;
  double median;
  double q975;
  bool operator==(const DistributionSummary &) const = default;
};

// Density of the mixture.  Throws std::domain_error if any component is a
// point mass.
double mixture_pdf(const Mixture &m, double x);
double mixture_cdf(const Mixture &m, double x);

// Smallest x with mixture_cdf(m, x) >= q, found by bisection on a bracket
// built from the component supports.  Throws std::domain_error when q is
// outside (0, 1) and std::runtime_error if the bracket does not straddle q.
double mixture_quantile(const Mixture &m, double q);

Moments mixture_moments(const Mixture &m);

// Two-stage draw: component index, then a variate from that component.
// Deterministic given the seed.
std::vector<double> sample(const Mixture &m, std::uint64_t seed,
                           std::size_t n);
double sample_one(const Mixture &m, Rng &rng);

// Mean, sd and the central 95% interval with median.
DistributionSummary summarize(const Mixture &m);

}  // namespace mixprior

#endif  // MIXPRIOR_MIXTURE_HPP_
