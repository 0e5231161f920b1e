#include "mixprior/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mixprior/random.hpp"

namespace mixprior {

namespace {

// Type-7 (linear interpolation) quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// log theta^r (1 - theta)^(n - r), without the binomial coefficient.
double log_kernel(double theta, std::int64_t r, std::int64_t n) {
  double value = 0.0;
  if (r > 0) value += static_cast<double>(r) * std::log(theta);
  if (n - r > 0) value += static_cast<double>(n - r) * std::log1p(-theta);
  return value;
}

}  // namespace

std::size_t dimension(const WeightPrior &prior) {
  if (const auto *f = std::get_if<FixedWeights>(&prior)) return f->weights.size();
  return std::get<DirichletWeights>(prior).concentration.size();
}

std::vector<double> expected_weights(const WeightPrior &prior) {
  if (const auto *f = std::get_if<FixedWeights>(&prior)) return f->weights;
  return dirichlet_mean(std::get<DirichletWeights>(prior).concentration);
}

void validate(const WeightPrior &prior) {
  if (const auto *f = std::get_if<FixedWeights>(&prior)) {
    double total = 0.0;
    for (double w : f->weights) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("fixed weights must lie in [0, 1]");
      }
      total += w;
    }
    if (std::fabs(total - 1.0) > Mixture::kWeightTolerance) {
      std::ostringstream msg;
      msg << "weights sum to " << total;
      throw std::invalid_argument(msg.str());
    }
    return;
  }
  dirichlet_mean(std::get<DirichletWeights>(prior).concentration);
}

void LatentModelSpec::validate() const {
  if (components.size() < 2) {
    throw std::invalid_argument("latent model needs at least two components");
  }
  if (components.size() != dimension(weight_prior)) {
    throw std::invalid_argument(
        "weight prior dimension does not match the component count");
  }
  for (const auto &c : components) {
    mixprior::validate(c);
    if (!is_beta(c)) {
      throw std::invalid_argument("latent model components must be Beta");
    }
  }
  mixprior::validate(weight_prior);
  data.validate();
}

ChainOutput gibbs_run(const LatentModelSpec &spec, const GibbsConfig &cfg) {
  spec.validate();
  if (cfg.thin < 1) throw std::invalid_argument("thin must be at least 1");
  if (cfg.iterations < 1) {
    throw std::invalid_argument("iterations must be at least 1");
  }

  const std::size_t k = spec.components.size();
  std::vector<Beta> priors(k);
  for (std::size_t i = 0; i < k; ++i) priors[i] = std::get<Beta>(spec.components[i]);
  const auto r = spec.data.r;
  const auto n = spec.data.n;
  const double successes = static_cast<double>(r);
  const double failures = static_cast<double>(n - r);

  const auto *dirichlet = std::get_if<DirichletWeights>(&spec.weight_prior);
  std::vector<double> pi = expected_weights(spec.weight_prior);
  std::vector<double> posterior_concentration;
  if (dirichlet != nullptr) posterior_concentration = dirichlet->concentration;

  ChainOutput out;
  if (cfg.iterations < GibbsConfig::kMinIterationsForSummary) {
    out.warnings.push_back("only " + std::to_string(cfg.iterations) +
                           " iterations; summaries need at least " +
                           std::to_string(GibbsConfig::kMinIterationsForSummary));
  }
  const std::size_t retained = cfg.iterations / cfg.thin;
  out.theta_draws.reserve(retained);
  out.z_draws.reserve(retained);
  if (dirichlet != nullptr) {
    out.pi_draws.emplace(k);
    for (auto &col : *out.pi_draws) col.reserve(retained);
  }

  Rng rng(cfg.seed, cfg.stream);
  std::size_t z = static_cast<std::size_t>(
      std::max_element(pi.begin(), pi.end()) - pi.begin());
  std::vector<double> theta(k);
  std::vector<double> log_w(k);
  std::vector<double> probs(k);

  const std::size_t total = cfg.burn_in + cfg.iterations;
  for (std::size_t t = 1; t <= total; ++t) {
    // theta_i | Z: the selected component sees the data, the others are
    // refreshed from their priors.
    for (std::size_t i = 0; i < k; ++i) {
      theta[i] = i == z ? rng.beta(priors[i].alpha + successes,
                                   priors[i].beta + failures)
                        : rng.beta(priors[i].alpha, priors[i].beta);
    }

    // Z | theta, pi
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      log_w[i] = pi[i] > 0.0 ? std::log(pi[i]) + log_kernel(theta[i], r, n)
                             : -std::numeric_limits<double>::infinity();
      top = std::max(top, log_w[i]);
    }
    if (std::isfinite(top)) {
      for (std::size_t i = 0; i < k; ++i) probs[i] = std::exp(log_w[i] - top);
      z = rng.categorical(probs);
    }

    // pi | Z
    if (dirichlet != nullptr) {
      posterior_concentration[z] += 1.0;
      rng.dirichlet(posterior_concentration, pi);
      posterior_concentration[z] -= 1.0;
    }

    if (t <= cfg.burn_in) continue;
    const std::size_t kept = t - cfg.burn_in;
    if (kept % cfg.thin != 0) continue;
    out.theta_draws.push_back(theta[z]);
    out.z_draws.push_back(static_cast<int>(z) + 1);
    if (out.pi_draws) {
      for (std::size_t i = 0; i < k; ++i) (*out.pi_draws)[i].push_back(pi[i]);
    }
  }

  if (!out.theta_draws.empty()) {
    out.theta_summary = summarize_draws(out.theta_draws);
    const auto zs = series(out, {Quantity::Kind::kZ});
    out.z_summary = summarize_draws(zs);
    out.z_mean = out.z_summary.mean;
    if (out.pi_draws) {
      for (const auto &col : *out.pi_draws) {
        out.pi_summaries.push_back(summarize_draws(col));
      }
    }
  }
  return out;
}

DistributionSummary summarize_draws(std::span<const double> draws) {
  if (draws.empty()) throw std::invalid_argument("no draws to summarize");
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double x : draws) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  const double sd =
      count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0;
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  return {mean, sd, sorted_quantile(sorted, 0.025),
          sorted_quantile(sorted, 0.5), sorted_quantile(sorted, 0.975)};
}

std::vector<SummaryRow> chain_summary(const ChainOutput &c) {
  if (c.size() < GibbsConfig::kMinIterationsForSummary) {
    throw std::invalid_argument("chain summary needs at least " +
                                std::to_string(GibbsConfig::kMinIterationsForSummary) +
                                " retained draws");
  }
  std::vector<SummaryRow> rows{{"theta", c.theta_summary}, {"Z", c.z_summary}};
  for (std::size_t i = 0; i < c.pi_summaries.size(); ++i) {
    rows.push_back({"pi[" + std::to_string(i + 1) + "]", c.pi_summaries[i]});
  }
  return rows;
}

std::vector<double> series(const ChainOutput &c, Quantity q) {
  switch (q.kind) {
    case Quantity::Kind::kTheta:
      return c.theta_draws;
    case Quantity::Kind::kZ:
      return {c.z_draws.begin(), c.z_draws.end()};
    case Quantity::Kind::kPi:
      if (!c.pi_draws || q.component >= c.pi_draws->size()) {
        throw std::invalid_argument("chain has no such weight series");
      }
      return (*c.pi_draws)[q.component];
  }
  throw std::invalid_argument("unknown quantity");
}

double batch_means_mcse(std::span<const double> draws) {
  const std::size_t n = draws.size();
  if (n < GibbsConfig::kMinIterationsForSummary) {
    throw std::invalid_argument("MCSE needs at least " +
                                std::to_string(GibbsConfig::kMinIterationsForSummary) +
                                " draws");
  }
  const auto batch = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t batches = n / batch;
  const std::size_t used = batch * batches;

  // Centred on the first draw; a constant chain then gives exactly zero.
  const double origin = draws[0];
  std::vector<double> means(batches, 0.0);
  double grand = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double sum = 0.0;
    for (std::size_t j = 0; j < batch; ++j) sum += draws[b * batch + j] - origin;
    means[b] = sum / static_cast<double>(batch);
    grand += sum;
  }
  grand /= static_cast<double>(used);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double variance_estimate =
      static_cast<double>(batch) * ss / static_cast<double>(batches - 1);
  return std::sqrt(variance_estimate / static_cast<double>(used));
}

double mcse(const ChainOutput &c, Quantity q) {
  return batch_means_mcse(series(c, q));
}

double z_frequency(const ChainOutput &c, int component) {
  if (c.z_draws.empty()) return 0.0;
  const auto hits = std::count(c.z_draws.begin(), c.z_draws.end(), component);
  return static_cast<double>(hits) / static_cast<double>(c.z_draws.size());
}

void write_chain_csv(std::ostream &out, const ChainOutput &c,
                     std::size_t burn_in, std::size_t thin) {
  const std::size_t k = c.pi_draws ? c.pi_draws->size() : 0;
  out << "iter,theta,z";
  for (std::size_t i = 0; i < k; ++i) out << ",pi_" << (i + 1);
  out << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t t = 0; t < c.size(); ++t) {
    out << burn_in + (t + 1) * thin << ',' << c.theta_draws[t] << ','
        << c.z_draws[t];
    for (std::size_t i = 0; i < k; ++i) out << ',' << (*c.pi_draws)[i][t];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mixprior
