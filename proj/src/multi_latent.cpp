#include "mixprior/multi_latent.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "mixprior/random.hpp"
#include "mixprior/special.hpp"

namespace mixprior {

namespace {

void require_length(const std::vector<double> &v, std::size_t m,
                    const char *name) {
  if (v.size() != m) {
    throw std::invalid_argument(std::string(name) + " has " +
                                std::to_string(v.size()) +
                                " entries but m = " + std::to_string(m));
  }
}

void require_positive(double x, const char *name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) +
                                " must be positive and finite");
  }
}

bool all_equal(const std::vector<double> &v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) ==
         v.end();
}

// Streaming first and second moments of a pair (x, y), mergeable with the
// pairwise update of Chan, Golub and LeVeque.
struct PairAccumulator {
  double n = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double m2_x = 0.0;
  double m2_y = 0.0;
  double c_xy = 0.0;

  void add(double x, double y) {
    n += 1.0;
    const double dx = x - mean_x;
    mean_x += dx / n;
    const double dy = y - mean_y;
    mean_y += dy / n;
    m2_x += dx * (x - mean_x);
    m2_y += dy * (y - mean_y);
    c_xy += dx * (y - mean_y);
  }

  void merge(const PairAccumulator &o) {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double dx = o.mean_x - mean_x;
    const double dy = o.mean_y - mean_y;
    m2_x += o.m2_x + dx * dx * n * o.n / total;
    m2_y += o.m2_y + dy * dy * n * o.n / total;
    c_xy += o.c_xy + dx * dy * n * o.n / total;
    mean_x += dx * o.n / total;
    mean_y += dy * o.n / total;
    n = total;
  }

  double var_x() const { return m2_x / (n - 1.0); }
  double var_y() const { return m2_y / (n - 1.0); }
  double cov() const { return c_xy / (n - 1.0); }
  double cor() const {
    const double denom = std::sqrt(m2_x * m2_y);
    return denom > 0.0 ? c_xy / denom : 0.0;
  }
};

struct BatchStats {
  PairAccumulator z;
  PairAccumulator theta;
  // Indexed by the value of Z_k: counts of Z_k = v and of (Z_j = 1, Z_k = v).
  std::array<double, 2> given{0.0, 0.0};
  std::array<double, 2> hits_given{0.0, 0.0};
  std::vector<double> sum_counts;

  void merge(const BatchStats &o) {
    z.merge(o.z);
    theta.merge(o.theta);
    for (int v = 0; v < 2; ++v) {
      given[v] += o.given[v];
      hits_given[v] += o.hits_given[v];
    }
    for (std::size_t s = 0; s < sum_counts.size(); ++s) {
      sum_counts[s] += o.sum_counts[s];
    }
  }
};

struct Estimate {
  LatentMoments latent;
  std::optional<ThetaMoments> theta;
  std::vector<double> sum_frequencies;
};

Estimate estimate(const BatchStats &s, std::size_t m, bool with_theta) {
  Estimate e;
  e.latent.mean_z = s.z.mean_x;
  e.latent.var_z = s.z.var_x();
  if (m >= 2) {
    e.latent.cov_z = s.z.cov();
    e.latent.cor_z = s.z.cor();
    e.latent.conditional_z1_given_z0 =
        s.given[0] > 0.0 ? s.hits_given[0] / s.given[0] : 0.0;
    e.latent.conditional_z1_given_z1 =
        s.given[1] > 0.0 ? s.hits_given[1] / s.given[1] : 0.0;
  }
  if (with_theta) {
    ThetaMoments t;
    t.mean_theta = s.theta.mean_x;
    t.var_theta = s.theta.var_x();
    if (m >= 2) {
      t.cov_theta = s.theta.cov();
      t.cor_theta = s.theta.cor();
    }
    e.theta = t;
  }
  e.sum_frequencies.resize(s.sum_counts.size());
  for (std::size_t i = 0; i < s.sum_counts.size(); ++i) {
    e.sum_frequencies[i] = s.sum_counts[i] / s.z.n;
  }
  return e;
}

BatchStats simulate_batch(const ShrinkageSpec &spec, std::size_t draws,
                          Rng &rng) {
  const std::size_t m = spec.m;
  BatchStats stats;
  stats.sum_counts.assign(m + 1, 0.0);
  std::vector<int> z(m);
  std::vector<double> theta(m);
  std::vector<double> prob(m);

  const auto &version = spec.version;
  if (const auto *fixed = std::get_if<IndependentFixed>(&version)) {
    prob = fixed->p;
  }

  for (std::size_t d = 0; d < draws; ++d) {
    if (const auto *shared = std::get_if<SharedBeta>(&version)) {
      std::fill(prob.begin(), prob.end(), rng.beta(shared->a, shared->b));
    } else if (const auto *indep = std::get_if<IndependentBeta>(&version)) {
      for (std::size_t j = 0; j < m; ++j) prob[j] = rng.beta(indep->a[j], indep->b[j]);
    }
    std::size_t total = 0;
    for (std::size_t j = 0; j < m; ++j) {
      z[j] = rng.uniform() < prob[j] ? 1 : 0;
      total += static_cast<std::size_t>(z[j]);
    }
    if (spec.components) {
      for (std::size_t j = 0; j < m; ++j) {
        theta[j] = sample_component(z[j] ? spec.components->f1
                                         : spec.components->f2,
                                    rng);
      }
    }
    const std::size_t k = m >= 2 ? 1 : 0;
    stats.z.add(z[0], z[k]);
    if (spec.components) stats.theta.add(theta[0], theta[k]);
    if (m >= 2) {
      stats.given[z[1]] += 1.0;
      stats.hits_given[z[1]] += z[0];
    }
    stats.sum_counts[total] += 1.0;
  }
  return stats;
}

double spread(const std::vector<double> &values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

void ShrinkageSpec::validate() const {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  std::visit(
      [this](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IndependentFixed>) {
          require_length(v.p, m, "p");
          for (double p : v.p) {
            if (!(p >= 0.0 && p <= 1.0)) {
              throw std::invalid_argument("probabilities must lie in [0, 1]");
            }
          }
        } else if constexpr (std::is_same_v<T, IndependentBeta>) {
          require_length(v.a, m, "a");
          require_length(v.b, m, "b");
          for (double x : v.a) require_positive(x, "a");
          for (double x : v.b) require_positive(x, "b");
        } else {
          require_positive(v.a, "a");
          require_positive(v.b, "b");
        }
      },
      version);
  if (components) {
    mixprior::validate(components->f1);
    mixprior::validate(components->f2);
  }
}

std::vector<double> marginal_inclusion(const ShrinkageSpec &spec) {
  spec.validate();
  return std::visit(
      [&spec](const auto &v) -> std::vector<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IndependentFixed>) {
          return v.p;
        } else if constexpr (std::is_same_v<T, IndependentBeta>) {
          return equivalence_1a_1b(v.a, v.b).p;
        } else {
          return std::vector<double>(spec.m, v.a / (v.a + v.b));
        }
      },
      spec.version);
}

IndependentFixed equivalence_1a_1b(std::span<const double> a,
                                   std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("a and b must have the same length");
  }
  IndependentFixed fixed;
  fixed.p.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    require_positive(a[j], "a");
    require_positive(b[j], "b");
    fixed.p[j] = a[j] / (a[j] + b[j]);
  }
  return fixed;
}

LatentMoments latent_moments_analytic(const ShrinkageSpec &spec, std::size_t j,
                                      std::size_t k) {
  const auto inclusion = marginal_inclusion(spec);
  if (j >= spec.m || (spec.m >= 2 && (k >= spec.m || k == j))) {
    throw std::out_of_range("indicator indices out of range");
  }
  LatentMoments out;
  out.mean_z = inclusion[j];
  if (const auto *shared = std::get_if<SharedBeta>(&spec.version)) {
    const double s = shared->a + shared->b;
    out.var_z = shared->a * shared->b / (s * s);
    if (spec.m >= 2) {
      out.cov_z = shared->a * shared->b / (s * s * (s + 1.0));
      out.cor_z = 1.0 / (s + 1.0);
      out.conditional_z1_given_z0 = shared->a / (s + 1.0);
      out.conditional_z1_given_z1 = (shared->a + 1.0) / (s + 1.0);
    }
    return out;
  }
  out.var_z = out.mean_z * (1.0 - out.mean_z);
  if (spec.m >= 2) {
    out.cov_z = 0.0;
    out.cor_z = 0.0;
    out.conditional_z1_given_z0 = out.mean_z;
    out.conditional_z1_given_z1 = out.mean_z;
  }
  return out;
}

ThetaMoments theta_moments_analytic(const ShrinkageSpec &spec, std::size_t j,
                                    std::size_t k) {
  if (!spec.components) {
    throw std::invalid_argument("theta moments need the component pair F1, F2");
  }
  const LatentMoments latent = latent_moments_analytic(spec, j, k);
  const auto inclusion = marginal_inclusion(spec);
  const double mu1 = component_mean(spec.components->f1);
  const double mu2 = component_mean(spec.components->f2);
  const double var1 = component_variance(spec.components->f1);
  const double var2 = component_variance(spec.components->f2);
  const double gap2 = (mu1 - mu2) * (mu1 - mu2);

  auto variance_at = [&](double e) {
    return e * var1 + (1.0 - e) * var2 + e * (1.0 - e) * gap2;
  };

  ThetaMoments out;
  out.mean_theta = latent.mean_z * mu1 + (1.0 - latent.mean_z) * mu2;
  out.var_theta = variance_at(latent.mean_z);
  if (latent.cov_z) {
    // E[Cov(theta_j, theta_k | Z)] = 0, so only the Z covariance survives.
    out.cov_theta = gap2 * *latent.cov_z;
    const double denom =
        std::sqrt(out.var_theta * variance_at(inclusion[k]));
    out.cor_theta = denom > 0.0 ? *out.cov_theta / denom : 0.0;
  }
  return out;
}

const char *to_string(SumDistributionKind kind) {
  switch (kind) {
    case SumDistributionKind::kBinomial:
      return "binomial";
    case SumDistributionKind::kBetaBinomial:
      return "beta-binomial";
    case SumDistributionKind::kPoissonBinomial:
      return "poisson-binomial";
  }
  return "unknown";
}

double binomial_pmf(std::int64_t k, std::int64_t m, double p) {
  if (k < 0 || k > m) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == m ? 1.0 : 0.0;
  return std::exp(log_binomial_pmf(k, m, p));
}

double beta_binomial_pmf(std::int64_t k, std::int64_t m, double a, double b) {
  if (k < 0 || k > m) return 0.0;
  return std::exp(log_choose(m, k) +
                  log_beta(a + static_cast<double>(k),
                           b + static_cast<double>(m - k)) -
                  log_beta(a, b));
}

SumDistribution latent_sum_pmf(const ShrinkageSpec &spec) {
  spec.validate();
  const auto m = static_cast<std::int64_t>(spec.m);
  SumDistribution out;
  out.pmf.resize(spec.m + 1);
  if (const auto *shared = std::get_if<SharedBeta>(&spec.version)) {
    out.kind = SumDistributionKind::kBetaBinomial;
    for (std::int64_t s = 0; s <= m; ++s) {
      out.pmf[s] = beta_binomial_pmf(s, m, shared->a, shared->b);
    }
    return out;
  }
  const auto p = marginal_inclusion(spec);
  if (all_equal(p)) {
    out.kind = SumDistributionKind::kBinomial;
    for (std::int64_t s = 0; s <= m; ++s) out.pmf[s] = binomial_pmf(s, m, p[0]);
    return out;
  }
  out.kind = SumDistributionKind::kPoissonBinomial;
  std::fill(out.pmf.begin(), out.pmf.end(), 0.0);
  out.pmf[0] = 1.0;
  for (std::size_t j = 0; j < spec.m; ++j) {
    for (std::size_t s = j + 1; s > 0; --s) {
      out.pmf[s] = out.pmf[s] * (1.0 - p[j]) + out.pmf[s - 1] * p[j];
    }
    out.pmf[0] *= 1.0 - p[j];
  }
  return out;
}

std::vector<double> model_probabilities(const ShrinkageSpec &spec) {
  spec.validate();
  if (spec.m > kMaxEnumeratedParameters) {
    throw std::length_error("model enumeration is limited to m <= " +
                            std::to_string(kMaxEnumeratedParameters));
  }
  const std::size_t m = spec.m;
  const std::size_t patterns = std::size_t{1} << m;
  std::vector<double> probs(patterns);

  if (const auto *shared = std::get_if<SharedBeta>(&spec.version)) {
    // B(a + s, b + m - s) / B(a, b) as a product of m paired ratios.
    std::vector<double> by_sum(m + 1);
    const double a = shared->a;
    const double b = shared->b;
    for (std::size_t s = 0; s <= m; ++s) {
      double value = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double numer = i < s ? a + static_cast<double>(i)
                                   : b + static_cast<double>(i - s);
        value *= numer / (a + b + static_cast<double>(i));
      }
      by_sum[s] = value;
    }
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      probs[mask] = by_sum[static_cast<std::size_t>(std::popcount(mask))];
    }
    return probs;
  }

  const auto p = marginal_inclusion(spec);
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    double value = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      value *= (mask >> j) & 1U ? p[j] : 1.0 - p[j];
    }
    probs[mask] = value;
  }
  return probs;
}

ShrinkageSimulation simulate_shrinkage(const ShrinkageSpec &spec,
                                       std::size_t n_draws, std::uint64_t seed,
                                       unsigned workers) {
  spec.validate();
  if (n_draws < kMinSimulationDraws) {
    throw std::invalid_argument("simulation needs at least " +
                                std::to_string(kMinSimulationDraws) + " draws");
  }
  constexpr std::size_t batches = kSimulationBatches;
  std::vector<BatchStats> results(batches);
  auto run_batch = [&](std::size_t b) {
    const std::size_t size =
        n_draws / batches + (b < n_draws % batches ? 1 : 0);
    Rng rng(seed, b + 1);
    results[b] = simulate_batch(spec, size, rng);
  };

  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, batches));
  if (workers == 1) {
    for (std::size_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < batches; b += workers) run_batch(b);
      });
    }
    for (auto &t : pool) t.join();
  }

  BatchStats merged = results[0];
  for (std::size_t b = 1; b < batches; ++b) merged.merge(results[b]);

  const bool with_theta = spec.components.has_value();
  const Estimate overall = estimate(merged, spec.m, with_theta);
  std::vector<Estimate> per_batch;
  per_batch.reserve(batches);
  for (const auto &r : results) per_batch.push_back(estimate(r, spec.m, with_theta));

  auto se_of = [&](auto getter) {
    std::vector<double> values;
    values.reserve(batches);
    for (const auto &e : per_batch) values.push_back(getter(e));
    return spread(values);
  };

  ShrinkageSimulation out;
  out.n_draws = n_draws;
  out.latent = overall.latent;
  out.theta = overall.theta;
  out.sum_frequencies = overall.sum_frequencies;
  out.latent_se.mean_z = se_of([](const Estimate &e) { return e.latent.mean_z; });
  out.latent_se.var_z = se_of([](const Estimate &e) { return e.latent.var_z; });
  if (spec.m >= 2) {
    out.latent_se.cov_z = se_of([](const Estimate &e) { return *e.latent.cov_z; });
    out.latent_se.cor_z = se_of([](const Estimate &e) { return *e.latent.cor_z; });
    out.latent_se.conditional_z1_given_z0 = se_of(
        [](const Estimate &e) { return *e.latent.conditional_z1_given_z0; });
    out.latent_se.conditional_z1_given_z1 = se_of(
        [](const Estimate &e) { return *e.latent.conditional_z1_given_z1; });
  }
  if (with_theta) {
    out.theta_se.mean_theta =
        se_of([](const Estimate &e) { return e.theta->mean_theta; });
    out.theta_se.var_theta =
        se_of([](const Estimate &e) { return e.theta->var_theta; });
    if (spec.m >= 2) {
      out.theta_se.cov_theta =
          se_of([](const Estimate &e) { return *e.theta->cov_theta; });
      out.theta_se.cor_theta =
          se_of([](const Estimate &e) { return *e.theta->cor_theta; });
    }
  }
  out.sum_se.resize(spec.m + 1);
  for (std::size_t s = 0; s <= spec.m; ++s) {
    out.sum_se[s] = se_of([s](const Estimate &e) { return e.sum_frequencies[s]; });
  }
  return out;
}

//===========================================================================

std::vector<double> draw_normal_inverse_gamma(double mu, double shape,
                                              double scale, std::size_t n,
                                              std::uint64_t seed) {
  require_positive(shape, "inverse-Gamma shape");
  require_positive(scale, "inverse-Gamma scale");
  Rng rng(seed);
  std::vector<double> draws(n);
  for (auto &x : draws) {
    const double variance = scale / rng.gamma(shape);
    x = mu + std::sqrt(variance) * rng.normal();
  }
  return draws;
}

double ks_distance(std::span<const double> draws,
                   const std::function<double(double)> &cdf) {
  if (draws.empty()) throw std::invalid_argument("no draws");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    worst = std::max({worst, above, below});
  }
  return worst;
}

MarginalCheck marginal_extension_check(double mu, double shape, double scale,
                                       std::size_t n_draws,
                                       std::uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("need at least one draw");
  MarginalCheck out;
  out.degrees_of_freedom = 2.0 * shape;
  out.location = mu;
  out.scale = std::sqrt(scale / shape);
  out.n_draws = n_draws;
  const auto draws = draw_normal_inverse_gamma(mu, shape, scale, n_draws, seed);
  out.ks_distance = ks_distance(draws, [&out](double x) {
    return student_t_cdf(x, out.degrees_of_freedom, out.location, out.scale);
  });
  return out;
}

}  // namespace mixprior
