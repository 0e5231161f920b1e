#include "mixprior/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mixprior/conjugate.hpp"
#include "mixprior/gibbs.hpp"
#include "mixprior/multi_latent.hpp"

namespace mixprior {

namespace {

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kSummaryColumns{"mean", "sd", "2.5%", "median",
                                               "97.5%"};

std::vector<std::string> with_label(std::string label,
                                    const std::vector<std::string> &rest) {
  std::vector<std::string> columns{std::move(label)};
  columns.insert(columns.end(), rest.begin(), rest.end());
  return columns;
}

std::vector<double> summary_values(const DistributionSummary &s) {
  return {s.mean, s.sd, s.q025, s.median, s.q975};
}

double or_na(const std::optional<double> &v) { return v ? *v : kNA; }

std::string describe(const WeightPrior &w) {
  std::ostringstream out;
  const bool fixed = std::holds_alternative<FixedWeights>(w);
  const auto &values = fixed ? std::get<FixedWeights>(w).weights
                             : std::get<DirichletWeights>(w).concentration;
  out << (fixed ? "fixed (" : "Dirichlet(");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? ", " : "") << values[i];
  }
  out << ")";
  return out.str();
}

void run_update(const UpdatePayload &p, ResultDocument &doc) {
  const Mixture prior(p.components, expected_weights(p.weights));
  const auto result = posterior_update(prior, p.data);

  ResultTable components{"posterior_components",
                         {"component", "prior_weight", "marginal_likelihood",
                          "posterior_weight", "posterior_alpha",
                          "posterior_beta"},
                         {},
                         ""};
  if (std::holds_alternative<DirichletWeights>(p.weights)) {
    components.note = "prior weights are the means of " + describe(p.weights);
  }
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const auto &post = std::get<Beta>(result.posterior.components()[i]);
    components.rows.push_back(
        {std::to_string(i + 1) + ": " + mixprior::describe(prior.components()[i]),
         {result.prior_weights[i], result.marginal_likelihoods[i],
          result.posterior_weights[i], post.alpha, post.beta}});
  }
  doc.tables.push_back(std::move(components));

  ResultTable summary{"summary", with_label("distribution", kSummaryColumns), {}, ""};
  summary.rows.push_back({"prior", summary_values(summarize(prior))});
  summary.rows.push_back({"posterior", summary_values(summarize(result.posterior))});
  doc.tables.push_back(std::move(summary));
}

void run_gibbs(const GibbsPayload &p, std::uint64_t seed,
               const RunOptions &options, ResultDocument &doc) {
  const std::size_t count = p.analyses.size();
  std::vector<ChainOutput> chains;
  chains.reserve(count);
  for (std::size_t a = 0; a < count; ++a) {
    const LatentModelSpec spec{p.components, p.analyses[a], p.data};
    GibbsConfig cfg;
    cfg.burn_in = p.burn_in;
    cfg.iterations = p.iterations;
    cfg.thin = p.thin;
    cfg.seed = seed;
    cfg.stream = a;
    chains.push_back(gibbs_run(spec, cfg));
    for (const auto &w : chains.back().warnings) {
      doc.warnings.push_back("analysis " + std::to_string(a + 1) + ": " + w);
    }
    if (options.dump_chain) {
      const auto path = chain_dump_path(*options.dump_chain, a + 1, count);
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write chain dump " + path);
      write_chain_csv(out, chains.back(), p.burn_in, p.thin);
    }
  }

  ResultTable summary{"posterior_summary", with_label("node", kSummaryColumns), {}, ""};
  for (std::size_t a = 0; a < count; ++a) {
    summary.rows.push_back({"p[" + std::to_string(a + 1) + "]",
                            summary_values(chains[a].theta_summary)});
  }
  for (std::size_t a = 0; a < count; ++a) {
    summary.rows.push_back({"Z[" + std::to_string(a + 1) + "]",
                            summary_values(chains[a].z_summary)});
  }
  doc.tables.push_back(std::move(summary));

  // Posterior of the uncertain weights, w<analysis>[<component>].
  ResultTable weights{"weight_summary", with_label("node", kSummaryColumns), {}, ""};
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t i = 0; i < chains[a].pi_summaries.size(); ++i) {
      weights.rows.push_back({"w" + std::to_string(a + 1) + "[" +
                                  std::to_string(i + 1) + "]",
                              summary_values(chains[a].pi_summaries[i])});
    }
  }
  if (!weights.rows.empty()) doc.tables.push_back(std::move(weights));

  const std::size_t k = p.components.size();
  std::vector<std::string> freq_columns{"analysis"};
  for (std::size_t i = 0; i < k; ++i) {
    freq_columns.push_back("P(Z=" + std::to_string(i + 1) + ")");
  }
  ResultTable allocation{"allocation", freq_columns, {}, ""};
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<double> freqs;
    for (std::size_t i = 0; i < k; ++i) {
      freqs.push_back(z_frequency(chains[a], static_cast<int>(i) + 1));
    }
    allocation.rows.push_back(
        {std::to_string(a + 1) + ": " + describe(p.analyses[a]), freqs});
  }
  doc.tables.push_back(std::move(allocation));

  ResultTable errors{"mcse", {"node", "mcse"}, {}, "batch means"};
  for (std::size_t a = 0; a < count; ++a) {
    const bool enough =
        chains[a].size() >= GibbsConfig::kMinIterationsForSummary;
    errors.rows.push_back(
        {"p[" + std::to_string(a + 1) + "]",
         {enough ? mcse(chains[a], {Quantity::Kind::kTheta}) : kNA}});
    errors.rows.push_back(
        {"Z[" + std::to_string(a + 1) + "]",
         {enough ? mcse(chains[a], {Quantity::Kind::kZ}) : kNA}});
  }
  doc.tables.push_back(std::move(errors));
}

void run_shrinkage(const ShrinkagePayload &p, std::uint64_t seed,
                   ResultDocument &doc) {
  const auto &spec = p.spec;
  std::optional<ShrinkageSimulation> sim;
  if (p.draws > 0) sim = simulate_shrinkage(spec, p.draws, seed);

  const auto latent = latent_moments_analytic(spec);
  ResultTable latent_table{
      "latent_moments",
      {"source", "mean_z", "var_z", "cov_z", "cor_z", "P(Zj=1|Zk=0)",
       "P(Zj=1|Zk=1)"},
      {},
      "pair (Z_1, Z_2)"};
  auto latent_row = [](const LatentMoments &l) {
    return std::vector<double>{l.mean_z,
                               l.var_z,
                               or_na(l.cov_z),
                               or_na(l.cor_z),
                               or_na(l.conditional_z1_given_z0),
                               or_na(l.conditional_z1_given_z1)};
  };
  latent_table.rows.push_back({"analytic", latent_row(latent)});
  if (sim) {
    latent_table.rows.push_back({"simulated", latent_row(sim->latent)});
    const auto &se = sim->latent_se;
    const bool pair = spec.m >= 2;
    latent_table.rows.push_back(
        {"se",
         {se.mean_z, se.var_z, pair ? se.cov_z : kNA, pair ? se.cor_z : kNA,
          pair ? se.conditional_z1_given_z0 : kNA,
          pair ? se.conditional_z1_given_z1 : kNA}});
  }
  doc.tables.push_back(std::move(latent_table));

  if (spec.components) {
    const auto theta = theta_moments_analytic(spec);
    ResultTable theta_table{"theta_moments",
                            {"source", "mean", "var", "cov", "cor"},
                            {},
                            "pair (theta_1, theta_2)"};
    auto theta_row = [](const ThetaMoments &t) {
      return std::vector<double>{t.mean_theta, t.var_theta, or_na(t.cov_theta),
                                 or_na(t.cor_theta)};
    };
    theta_table.rows.push_back({"analytic", theta_row(theta)});
    if (sim && sim->theta) {
      theta_table.rows.push_back({"simulated", theta_row(*sim->theta)});
      const auto &se = sim->theta_se;
      const bool pair = spec.m >= 2;
      theta_table.rows.push_back({"se",
                                  {se.mean_theta, se.var_theta,
                                   pair ? se.cov_theta : kNA,
                                   pair ? se.cor_theta : kNA}});
    }
    doc.tables.push_back(std::move(theta_table));
  }

  const auto sum = latent_sum_pmf(spec);
  std::vector<std::string> sum_columns{"sum", "probability"};
  if (sim) {
    sum_columns.push_back("simulated");
    sum_columns.push_back("se");
  }
  ResultTable sum_table{"latent_sum_pmf", sum_columns, {}, to_string(sum.kind)};
  for (std::size_t s = 0; s < sum.pmf.size(); ++s) {
    std::vector<double> values{sum.pmf[s]};
    if (sim) {
      values.push_back(sim->sum_frequencies[s]);
      values.push_back(sim->sum_se[s]);
    }
    sum_table.rows.push_back({std::to_string(s), values});
  }
  doc.tables.push_back(std::move(sum_table));

  if (p.patterns) {
    const auto probs = model_probabilities(spec);
    ResultTable patterns{"model_probabilities", {"bitmask", "probability"}, {},
                         "bit j set iff Z_(j+1) = 1"};
    for (std::size_t mask = 0; mask < probs.size(); ++mask) {
      patterns.rows.push_back({std::to_string(mask), {probs[mask]}});
    }
    doc.tables.push_back(std::move(patterns));
  }
}

void run_marginal(const MarginalPayload &p, std::uint64_t seed,
                  ResultDocument &doc) {
  const auto check = marginal_extension_check(p.mu, p.shape, p.scale, p.draws, seed);
  ResultTable table{"marginal_check",
                    {"reference", "ks_distance", "df", "location", "scale",
                     "draws"},
                    {},
                    "normal with inverse-Gamma variance vs Student-t"};
  table.rows.push_back({"student_t",
                        {check.ks_distance, check.degrees_of_freedom,
                         check.location, check.scale,
                         static_cast<double>(check.n_draws)}});
  doc.tables.push_back(std::move(table));
}

}  // namespace

std::string chain_dump_path(const std::string &base, std::size_t index,
                            std::size_t count) {
  if (count <= 1) return base;
  const std::filesystem::path path(base);
  auto name = path.stem().string() + "." + std::to_string(index) +
              path.extension().string();
  return (path.parent_path() / name).string();
}

ResultDocument run(const AnalysisConfig &config, const RunOptions &options) {
  ResultDocument doc;
  doc.config_echo = render_config(config);
  doc.provenance.seed = config.seed;
  doc.provenance.timestamp = utc_timestamp();

  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UpdatePayload>) {
          run_update(p, doc);
        } else if constexpr (std::is_same_v<T, GibbsPayload>) {
          run_gibbs(p, config.seed, options, doc);
        } else if constexpr (std::is_same_v<T, ShrinkagePayload>) {
          run_shrinkage(p, config.seed, doc);
        } else {
          run_marginal(p, config.seed, doc);
        }
      },
      config.payload);
  return doc;
}

}  // namespace mixprior
