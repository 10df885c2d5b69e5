#pragma once

#include <span>

namespace alq {

double mean(std::span<const double> values);

// Divides by n - 1; zero for fewer than two values.
double sample_variance(std::span<const double> values);

/// Linear interpolation between order statistics of already sorted values
/// (position (n - 1) q).
double sorted_quantile(std::span<const double> sorted, double q);

double lag1_autocorrelation(std::span<const double> values);

}  // namespace alq
