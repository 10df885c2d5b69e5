#include "alq/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "alq/errors.hpp"
#include "alq/model.hpp"

namespace alq {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double sample_uniform01(RngStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sample_standard_normal(RngStream& rng) {
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double sample_gamma(double shape, double rate, RngStream& rng) {
  if (!positive_finite(shape) || !positive_finite(rate)) {
    throw ParameterError("gamma draw needs shape > 0 and rate > 0 (got shape " +
                         std::to_string(shape) + ", rate " + std::to_string(rate) + ")");
  }
  boost::random::gamma_distribution<double> gamma(shape, 1.0);
  return gamma(rng) / rate;
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!positive_finite(shape) || !positive_finite(scale)) {
    throw ParameterError("inverse-gamma draw needs shape > 0 and scale > 0 (got shape " +
                         std::to_string(shape) + ", scale " + std::to_string(scale) + ")");
  }
  boost::random::gamma_distribution<double> gamma(shape, 1.0);
  return scale / gamma(rng);
}

double sample_gig_half(const GigHalfParams& params, RngStream& rng) {
  const double rho1 = params.rho1;
  const double rho2 = params.rho2;
  if (!positive_finite(rho2)) {
    throw ParameterError("GIG(1/2) draw needs rho2 > 0 (got " + std::to_string(rho2) + ")");
  }
  if (!(rho1 >= 0.0) || !std::isfinite(rho1)) {
    throw ParameterError("GIG(1/2) draw needs rho1 >= 0 (got " + std::to_string(rho1) + ")");
  }
  if (rho1 == 0.0) return sample_gamma(0.5, 0.5 * rho2, rng);

  // W = 1/X is inverse Gaussian with mean sqrt(rho2 / rho1) and shape rho2.
  // Both MSH roots are written relative to that mean so neither cancels nor
  // overflows when rho1 * rho2 is tiny: the roots are mean / r and mean * r.
  const double nu = sample_standard_normal(rng);
  const double q = nu * nu / (2.0 * std::sqrt(rho1 * rho2));
  const double r = 1.0 + q + std::sqrt(q * (2.0 + q));
  const double inv_mean = std::sqrt(rho1 / rho2);
  const double u = sample_uniform01(rng);
  // Small root (large X) is kept with probability r / (1 + r).
  return u * (1.0 + r) <= r ? r * inv_mean : inv_mean / r;
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& spd) {
  const Eigen::Index d = spd.rows();
  if (spd.cols() != d) throw ParameterError("Cholesky factorization needs a square matrix");
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = spd(j, j);
    for (Eigen::Index c = 0; c < j; ++c) pivot -= lower(j, c) * lower(j, c);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw NumericError("matrix is not positive definite at pivot " + std::to_string(j), j);
    }
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      double acc = spd(i, j);
      for (Eigen::Index c = 0; c < j; ++c) acc -= lower(i, c) * lower(j, c);
      lower(i, j) = acc / diag;
    }
  }
  return lower;
}

Eigen::VectorXd sample_gaussian_from_precision(const Eigen::MatrixXd& precision,
                                               const Eigen::VectorXd& linear_term,
                                               RngStream& rng) {
  if (linear_term.size() != precision.rows()) {
    throw ParameterError("precision and linear term dimensions differ");
  }
  const Eigen::MatrixXd lower = cholesky_lower(precision);
  const auto l = lower.triangularView<Eigen::Lower>();
  const auto lt = lower.transpose().triangularView<Eigen::Upper>();

  // mean = P^{-1} c, then add L^{-T} xi whose covariance is (L L^T)^{-1}.
  Eigen::VectorXd result = lt.solve(l.solve(linear_term));
  Eigen::VectorXd noise(linear_term.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = sample_standard_normal(rng);
  result += lt.solve(noise);
  return result;
}

std::int64_t sample_poisson(double mean, RngStream& rng) {
  constexpr double kMaxMean = 2147483647.0;
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ParameterError("Poisson draw needs a finite mean >= 0 (got " + std::to_string(mean) + ")");
  }
  if (mean > kMaxMean) {
    throw NumericError("Poisson mean " + std::to_string(mean) + " exceeds the count cap 2^31-1");
  }
  if (mean == 0.0) return 0;
  boost::random::poisson_distribution<std::int64_t, double> poisson(mean);
  const std::int64_t draw = poisson(rng);
  if (draw > static_cast<std::int64_t>(kMaxMean)) {
    throw NumericError("Poisson draw exceeds the count cap 2^31-1");
  }
  return draw;
}

double ald_logpdf(double y, double mu, double sigma, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("ALD needs 0 < p < 1");
  if (!positive_finite(sigma)) throw ParameterError("ALD needs sigma > 0");
  return std::log(p * (1.0 - p) / sigma) - check_loss((y - mu) / sigma, p);
}

}  // namespace alq
