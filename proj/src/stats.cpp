#include "alq/stats.hpp"

#include <cmath>
#include <numeric>

#include "alq/errors.hpp"

namespace alq {

double mean(std::span<const double> values) {
  if (values.empty()) throw ParameterError("mean of an empty sequence");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double acc = 0.0;
  for (double x : values) acc += (x - m) * (x - m);
  return acc / static_cast<double>(values.size() - 1);
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of an empty sequence");
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  if (lower + 1 >= sorted.size()) return sorted.back();
  const double frac = position - static_cast<double>(lower);
  return sorted[lower] + frac * (sorted[lower + 1] - sorted[lower]);
}

double lag1_autocorrelation(std::span<const double> values) {
  if (values.size() < 3) return 0.0;
  const double m = mean(values);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double d = values[t] - m;
    den += d * d;
    if (t + 1 < values.size()) num += d * (values[t + 1] - m);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace alq
