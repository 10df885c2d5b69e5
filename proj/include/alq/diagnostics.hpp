#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "alq/gibbs.hpp"
#include "alq/model.hpp"

namespace alq {

/// Spiegelhalter DIC on the AL deviance of the latent responses.
/// dic = deviance_at_mean + 2 p_d, p_d = mean_deviance - deviance_at_mean.
struct ModelComparison {
  double quantile = 0.0;
  double nll = 0.0;
  double dic = 0.0;
  double p_d = 0.0;
  double mean_deviance = 0.0;
  double deviance_at_mean = 0.0;
};

/// Posterior means of beta, alpha and sigma over a chain's recorded draws.
struct PosteriorPoint {
  Eigen::VectorXd beta;
  Eigen::MatrixXd alpha;
  double sigma = 0.0;
};

PosteriorPoint posterior_point(const ChainOutput& chain);

/// The single fresh jitter of replicate h used to score its posterior mean.
/// Drawn from the replicate's refresh stream, so it is the same for NLL and DIC.
Eigen::VectorXd refreshed_latent(const PanelDataset& data, const QuantileSpec& spec,
                                 int jitter_index);

ModelComparison dic_from_deviances(std::span<const double> deviances, double deviance_at_mean);

/// DIC of one replicate; nll is deviance_at_mean / 2.
ModelComparison compute_dic(const ChainOutput& chain, const PanelDataset& data,
                            const QuantileSpec& spec);

/// Mean over replicates of the AL negative log-likelihood at each replicate's
/// posterior means.
double compute_nll(std::span<const ChainOutput> chains, const PanelDataset& data,
                   const QuantileSpec& spec);

/// Replicate-averaged NLL, DIC and p_d for one quantile level.
ModelComparison compare_models(std::span<const ChainOutput> chains, const PanelDataset& data,
                               const QuantileSpec& spec);

struct TracePoint {
  std::int64_t iteration;
  double value;
};

struct DensityPoint {
  double x;
  double density;
};

/// Selectors: "beta[h]" and "g2[h]" (1-based, h <= k), "alpha[i][j]"
/// (1-based subject and column), "sigma", "phi2", "lambda2", "deviance".
std::vector<TracePoint> export_trace(const ChainOutput& chain, std::string_view selector);

/// Every selector accepted by export_trace for a chain of this shape, except
/// the per-subject alpha entries.
std::vector<std::string> trace_selectors(const ChainOutput& chain);

double silverman_bandwidth(std::span<const double> values);

/// Gaussian-kernel density with Silverman's bandwidth on an equally spaced
/// grid covering the data range plus three bandwidths each side.
std::vector<DensityPoint> kde_density(std::span<const double> values, int grid_size);

// CSV writers. Headers are `iter,value`, `x,density` and
// `quantile,nll,dic,p_d`; numbers use the shortest round-trip form.
void write_trace_csv(std::ostream& out, std::span<const TracePoint> rows);
void write_density_csv(std::ostream& out, std::span<const DensityPoint> rows);
void write_comparison_csv(std::ostream& out, std::span<const ModelComparison> rows);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace alq
