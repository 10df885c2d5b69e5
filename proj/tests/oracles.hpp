#pragma once

// Reference computations used by the tests. Nothing here calls into the
// library's samplers: densities are written out from their kernels and
// normalized numerically.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

/// Mean of a density known up to a constant on (0, upper), by quadrature of
/// x * kernel over kernel.
inline double kernel_mean(const std::function<double(double)>& kernel, double upper) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double z = ts.integrate(kernel, 0.0, upper);
  const double m = ts.integrate([&](double x) { return x * kernel(x); }, 0.0, upper);
  return m / z;
}

/// Tabulated CDF of a density given by its log-kernel on a grid. Positive
/// supports are gridded in log x so both tails are resolved.
class GridCdf {
 public:
  GridCdf(const std::function<double(double)>& log_kernel, double lo, double hi, bool log_scale,
          int points = 200000)
      : log_scale_(log_scale) {
    const double a = log_scale ? std::log(lo) : lo;
    const double b = log_scale ? std::log(hi) : hi;
    t_.resize(points);
    std::vector<double> logd(points);
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
      t_[i] = a + (b - a) * i / (points - 1);
      const double x = log_scale ? std::exp(t_[i]) : t_[i];
      // Jacobian of x = e^t.
      logd[i] = log_kernel(x) + (log_scale ? t_[i] : 0.0);
      top = std::max(top, logd[i]);
    }
    cdf_.assign(points, 0.0);
    double prev = std::exp(logd[0] - top);
    for (int i = 1; i < points; ++i) {
      const double cur = std::exp(logd[i] - top);
      cdf_[i] = cdf_[i - 1] + 0.5 * (prev + cur) * (t_[i] - t_[i - 1]);
      prev = cur;
    }
    const double total = cdf_.back();
    for (double& c : cdf_) c /= total;
  }

  double operator()(double x) const {
    const double t = log_scale_ ? (x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity()) : x;
    if (t <= t_.front()) return 0.0;
    if (t >= t_.back()) return 1.0;
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const auto i = static_cast<std::size_t>(it - t_.begin());
    const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
    return cdf_[i - 1] + w * (cdf_[i] - cdf_[i - 1]);
  }

 private:
  bool log_scale_;
  std::vector<double> t_;
  std::vector<double> cdf_;
};

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  // Ties are handled as one step so that atoms in the law are not penalized.
  for (std::size_t i = 0; i < sample.size();) {
    std::size_t j = i + 1;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double f = cdf(sample[i]);
    const double f_left = cdf(std::nextafter(sample[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, j / n - f, f_left - i / n});
    i = j;
  }
  return d;
}

/// Covariance of a Gaussian given its precision, by explicit dense inverse.
inline Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& m) { return m.inverse(); }

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  for (double x : xs) out.var += (x - out.mean) * (x - out.mean);
  out.var /= static_cast<double>(xs.size() - 1);
  return out;
}

}  // namespace oracle
