#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "alq/rng.hpp"

namespace alq {

/// GIG(1/2, rho1, rho2): density proportional to
/// x^{-1/2} exp(-(rho1 / x + rho2 * x) / 2) on x > 0.
struct GigHalfParams {
  double rho1 = 0.0;  // coefficient of 1/x
  double rho2 = 0.0;  // coefficient of x
};

/// Draws from GIG(1/2, rho1, rho2) as the reciprocal of an inverse-Gaussian
/// variate (Michael-Schucany-Haas). rho1 == 0 falls back to the limiting
/// Gamma(1/2, rate rho2 / 2) law.
double sample_gig_half(const GigHalfParams& params, RngStream& rng);

/// Draws from N(P^{-1} c, P^{-1}) using one Cholesky factorization of P.
Eigen::VectorXd sample_gaussian_from_precision(const Eigen::MatrixXd& precision,
                                               const Eigen::VectorXd& linear_term,
                                               RngStream& rng);

/// Lower Cholesky factor of a symmetric positive-definite matrix. Throws
/// NumericError with the failing pivot index.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& spd);

// Shape/rate: density proportional to x^{shape-1} exp(-rate x).
double sample_gamma(double shape, double rate, RngStream& rng);

// Shape/scale: density proportional to x^{-shape-1} exp(-scale / x).
double sample_inverse_gamma(double shape, double scale, RngStream& rng);

double sample_standard_normal(RngStream& rng);

// Uniform on [0, 1) with 53 random bits.
double sample_uniform01(RngStream& rng);

std::int64_t sample_poisson(double mean, RngStream& rng);

/// log f(y | mu, sigma, p) for the asymmetric Laplace distribution.
double ald_logpdf(double y, double mu, double sigma, double p);

}  // namespace alq
