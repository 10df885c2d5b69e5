#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "alq/model.hpp"
#include "alq/rng.hpp"

namespace alq {

/// Latent responses of one jittered copy of a dataset, flat in subject order.
struct JitteredLatent {
  Eigen::VectorXd z;
  int jitter_index = 0;
};

/// y* = y + u with a fresh u ~ unif[0, 1) per count.
std::vector<double> jitter_counts(std::span<const std::int64_t> y, RngStream& rng);

/// ln(y* - p) above the floor, ln(zeta) for y* <= p + zeta.
double latent_transform(double y_star, double p, double zeta);

/// Jitters every count of `data` and maps it to the latent scale.
JitteredLatent jitter_latent(const PanelDataset& data, double p, double zeta, int jitter_index,
                             RngStream& rng);

/// Integer p-quantile ceil(p + exp(x'beta + s'alpha_i) - 1), clamped below at 0.
std::int64_t predict_count_quantile(const Eigen::VectorXd& beta, const Eigen::VectorXd& alpha_i,
                                    const Eigen::VectorXd& x, const Eigen::VectorXd& s, double p);

// Same rule from a precomputed linear predictor.
std::int64_t count_quantile_from_predictor(double linear_predictor, double p);

}  // namespace alq
