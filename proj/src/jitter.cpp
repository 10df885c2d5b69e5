#include "alq/jitter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alq/distributions.hpp"
#include "alq/errors.hpp"

namespace alq {

std::vector<double> jitter_counts(std::span<const std::int64_t> y, RngStream& rng) {
  std::vector<double> y_star(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y_star[i] = static_cast<double>(y[i]) + sample_uniform01(rng);
  }
  return y_star;
}

double latent_transform(double y_star, double p, double zeta) {
  // The floor also covers p < y* < p + zeta so the map stays monotone.
  return std::log(std::max(y_star - p, zeta));
}

JitteredLatent jitter_latent(const PanelDataset& data, double p, double zeta, int jitter_index,
                             RngStream& rng) {
  JitteredLatent out{Eigen::VectorXd(data.n_total()), jitter_index};
  Index pos = 0;
  for (const auto& subject : data.subjects) {
    for (std::int64_t count : subject.y) {
      const double y_star = static_cast<double>(count) + sample_uniform01(rng);
      out.z[pos++] = latent_transform(y_star, p, zeta);
    }
  }
  return out;
}

std::int64_t count_quantile_from_predictor(double linear_predictor, double p) {
  // Beyond 2^62 the ceiling no longer fits comfortably in a signed count.
  constexpr double kMaxQuantile = 4.611686018427387904e18;
  if (!std::isfinite(linear_predictor)) {
    throw NumericError("linear predictor " + std::to_string(linear_predictor) + " is not finite");
  }
  const double value = p + std::exp(linear_predictor) - 1.0;
  if (!std::isfinite(value) || value > kMaxQuantile) {
    throw NumericError("exp overflow: linear predictor " + std::to_string(linear_predictor) +
                       " gives a quantile beyond the integer range");
  }
  const double ceiled = std::ceil(value);
  return ceiled <= 0.0 ? 0 : static_cast<std::int64_t>(ceiled);
}

std::int64_t predict_count_quantile(const Eigen::VectorXd& beta, const Eigen::VectorXd& alpha_i,
                                    const Eigen::VectorXd& x, const Eigen::VectorXd& s, double p) {
  if (beta.size() != x.size() || alpha_i.size() != s.size()) {
    throw ParameterError("covariate and coefficient dimensions differ");
  }
  return count_quantile_from_predictor(x.dot(beta) + s.dot(alpha_i), p);
}

}  // namespace alq
