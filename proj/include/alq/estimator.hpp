#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alq/diagnostics.hpp"
#include "alq/gibbs.hpp"
#include "alq/model.hpp"

namespace alq {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Equal-tailed interval from empirical quantiles (linear interpolation
/// between order statistics). Needs at least 10 draws.
Interval credible_interval(std::span<const double> draws, double level);

/// Variance of the jitter-averaged estimate:
///   (1 - 1/r) W + (1/r) B,  W = mean(vars),  B = r / (M - 1) * sum (mean_h - mean)^2
/// where r is the number of retained draws per replicate.
double pooled_variance(std::span<const double> replicate_means,
                       std::span<const double> replicate_vars, std::int64_t retained);

struct CoefficientSummary {
  std::string name;
  double avg_post_mean = 0.0;
  double pooled_sd = 0.0;
  double avg_ci_low = 0.0;
  double avg_ci_high = 0.0;
};

struct PosteriorSummary {
  double quantile = 0.0;
  double level = 0.95;
  int m_jitter = 0;
  std::int64_t retained_draws = 0;
  std::vector<CoefficientSummary> coefficients;     // beta[1..k]
  std::vector<CoefficientSummary> hyperparameters;  // sigma, phi2, lambda2
  std::vector<std::string> subject_ids;
  Eigen::MatrixXd alpha_mean;  // N x l, averaged over replicates
  double avg_nll = 0.0;
  double avg_dic = 0.0;
  double avg_p_d = 0.0;
};

struct FitOptions {
  std::int64_t thin = 1;
  bool record_latents = false;
  SigmaConditional sigma_conditional = SigmaConditional::kJointConsistent;
  double level = 0.95;
  int threads = 1;
};

struct JitterFit {
  PosteriorSummary summary;
  ModelComparison comparison;
  std::vector<ChainOutput> replicates;  // ordered by jitter index 1..M
};

/// Runs one chain per jitter index h = 1..M on stream (master_seed, h).
/// At most `options.threads` chains run at once; the result does not depend
/// on the thread count.
std::vector<ChainOutput> run_replicates(const PanelDataset& data, const QuantileSpec& spec,
                                        const PriorConfig& priors, const FitOptions& options);

/// Deterministic reduce over replicate chains (sorted by jitter index first).
PosteriorSummary summarize_replicates(std::span<const ChainOutput> replicates,
                                      const PanelDataset& data, const QuantileSpec& spec,
                                      double level);

JitterFit average_jitter_fit(const PanelDataset& data, const QuantileSpec& spec,
                             const PriorConfig& priors, const FitOptions& options);

}  // namespace alq
