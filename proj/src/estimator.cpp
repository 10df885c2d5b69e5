#include "alq/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "alq/errors.hpp"
#include "alq/rng.hpp"
#include "alq/stats.hpp"

namespace alq {

Interval credible_interval(std::span<const double> draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("credible level must lie in (0, 1)");
  if (draws.size() < 10) throw ParameterError("credible interval needs at least 10 draws");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const double tail = 0.5 * (1.0 - level);
  return {sorted_quantile(sorted, tail), sorted_quantile(sorted, 1.0 - tail)};
}

double pooled_variance(std::span<const double> replicate_means,
                       std::span<const double> replicate_vars, std::int64_t retained) {
  const auto m = replicate_means.size();
  if (m < 2) throw ParameterError("pooled variance needs at least two replicates");
  if (replicate_vars.size() != m) throw ParameterError("replicate means and variances differ in count");
  if (retained < 1) throw ParameterError("pooled variance needs r >= 1");
  for (double v : replicate_vars) {
    if (!(v >= 0.0)) throw ParameterError("replicate variances must be non-negative");
  }
  const double r = static_cast<double>(retained);
  const double within = mean(replicate_vars);
  const double grand = mean(replicate_means);
  double spread = 0.0;
  for (double x : replicate_means) spread += (x - grand) * (x - grand);
  const double between = r / static_cast<double>(m - 1) * spread;
  return (1.0 - 1.0 / r) * within + between / r;
}

std::vector<ChainOutput> run_replicates(const PanelDataset& data, const QuantileSpec& spec,
                                        const PriorConfig& priors, const FitOptions& options) {
  spec.validate();
  priors.validate();
  GibbsConfig config = GibbsConfig::from(spec);
  config.thin = options.thin;
  config.record_latents = options.record_latents;
  config.sigma_conditional = options.sigma_conditional;
  config.validate();

  const auto m = static_cast<std::size_t>(spec.m_jitter);
  std::vector<ChainOutput> results(m);
  std::vector<std::exception_ptr> failures(m);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t slot = next++; slot < m; slot = next++) {
      const int h = static_cast<int>(slot) + 1;
      try {
        RngStream rng(spec.master_seed,
                      replicate_stream_id(static_cast<std::uint64_t>(h), StreamPhase::kChain));
        results[slot] = run_chain(data, spec.p, spec.zeta, priors, config, h, rng);
      } catch (...) {
        failures[slot] = std::current_exception();
      }
    }
  };

  const auto threads = static_cast<std::size_t>(std::clamp<int>(options.threads, 1, spec.m_jitter));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return results;
}

PosteriorSummary summarize_replicates(std::span<const ChainOutput> replicates,
                                      const PanelDataset& data, const QuantileSpec& spec,
                                      double level) {
  if (replicates.size() < 2) throw ParameterError("summary needs at least two replicates");
  std::vector<const ChainOutput*> ordered;
  for (const auto& chain : replicates) ordered.push_back(&chain);
  std::sort(ordered.begin(), ordered.end(),
            [](const ChainOutput* a, const ChainOutput* b) { return a->jitter_index < b->jitter_index; });

  const Index retained = ordered.front()->size();
  for (const auto* chain : ordered) {
    if (chain->size() != retained) throw ParameterError("replicates retain different draw counts");
  }

  PosteriorSummary summary;
  summary.quantile = spec.p;
  summary.level = level;
  summary.m_jitter = static_cast<int>(ordered.size());
  summary.retained_draws = retained;

  std::vector<double> series(static_cast<std::size_t>(retained));
  auto summarize = [&](std::string name, const std::function<double(const ChainState&)>& pick) {
    std::vector<double> means;
    std::vector<double> vars;
    double low = 0.0;
    double high = 0.0;
    for (const auto* chain : ordered) {
      for (Index t = 0; t < retained; ++t) series[t] = pick(chain->draws[t]);
      means.push_back(mean(series));
      vars.push_back(sample_variance(series));
      const Interval ci = credible_interval(series, level);
      low += ci.low;
      high += ci.high;
    }
    const double m = static_cast<double>(ordered.size());
    return CoefficientSummary{std::move(name), mean(means),
                              std::sqrt(pooled_variance(means, vars, retained)), low / m,
                              high / m};
  };

  const Index k = ordered.front()->draws.front().beta.size();
  for (Index h = 0; h < k; ++h) {
    summary.coefficients.push_back(summarize("beta[" + std::to_string(h + 1) + "]",
                                             [h](const ChainState& s) { return s.beta[h]; }));
  }
  summary.hyperparameters.push_back(summarize("sigma", [](const ChainState& s) { return s.sigma; }));
  summary.hyperparameters.push_back(summarize("phi2", [](const ChainState& s) { return s.phi2; }));
  summary.hyperparameters.push_back(
      summarize("lambda2", [](const ChainState& s) { return s.lambda2; }));

  summary.alpha_mean = Eigen::MatrixXd::Zero(data.n_subjects(), data.l);
  for (const auto* chain : ordered) summary.alpha_mean += posterior_point(*chain).alpha;
  summary.alpha_mean /= static_cast<double>(ordered.size());
  for (const auto& subject : data.subjects) summary.subject_ids.push_back(subject.subject_id);

  const ModelComparison comparison = compare_models(replicates, data, spec);
  summary.avg_nll = comparison.nll;
  summary.avg_dic = comparison.dic;
  summary.avg_p_d = comparison.p_d;
  return summary;
}

JitterFit average_jitter_fit(const PanelDataset& data, const QuantileSpec& spec,
                             const PriorConfig& priors, const FitOptions& options) {
  JitterFit fit;
  fit.replicates = run_replicates(data, spec, priors, options);
  fit.summary = summarize_replicates(fit.replicates, data, spec, options.level);
  fit.comparison = compare_models(fit.replicates, data, spec);
  return fit;
}

}  // namespace alq
