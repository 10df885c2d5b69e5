#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/distributions/gamma.hpp>

#include "alq/distributions.hpp"
#include "alq/errors.hpp"
#include "alq/model.hpp"
#include "oracles.hpp"

using namespace alq;

namespace {

std::vector<double> gig_draws(double rho1, double rho2, int n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = sample_gig_half({rho1, rho2}, rng);
  return xs;
}

double gig_log_kernel(double x, double rho1, double rho2) {
  return -0.5 * std::log(x) - 0.5 * (rho1 / x + rho2 * x);
}

}  // namespace

TEST_CASE("GIG(1/2) means match quadrature of the kernel") {
  struct Case {
    double rho1, rho2;
  };
  for (const auto c : {Case{1, 1}, Case{4, 1}, Case{1, 4}}) {
    CAPTURE(c.rho1);
    CAPTURE(c.rho2);
    const double expected = oracle::kernel_mean(
        [&](double x) { return std::exp(gig_log_kernel(x, c.rho1, c.rho2)); }, 200.0);
    const auto m = oracle::moments(gig_draws(c.rho1, c.rho2, 1'000'000, 11)).mean;
    CHECK(m == doctest::Approx(expected).epsilon(0.01));
  }
  // Closed form for index 1/2: sqrt(rho1 / rho2) * (1 + 1 / sqrt(rho1 rho2)).
  CHECK(oracle::kernel_mean([](double x) { return std::exp(gig_log_kernel(x, 1, 1)); }, 200.0) ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("GIG(1/2) empirical CDF matches the grid oracle") {
  for (const auto [r1, r2] : {std::pair{1.0, 1.0}, std::pair{0.01, 3.0}, std::pair{50.0, 0.2}}) {
    CAPTURE(r1);
    const oracle::GridCdf cdf([&](double x) { return gig_log_kernel(x, r1, r2); }, 1e-10, 1e4, true);
    CHECK(oracle::ks_distance(gig_draws(r1, r2, 100'000, 5), cdf) < 0.02);
  }
}

TEST_CASE("GIG(1/2) reciprocals follow GIG(-1/2) with swapped coefficients") {
  const double r1 = 2.0, r2 = 0.5;
  auto xs = gig_draws(r1, r2, 1'000'000, 3);
  for (auto& x : xs) x = 1.0 / x;
  // Kernel of GIG(-1/2, r2, r1): y^{-3/2} exp(-(r2 / y + r1 y) / 2).
  const double expected = oracle::kernel_mean(
      [&](double y) { return y > 0 ? std::exp(-1.5 * std::log(y) - 0.5 * (r2 / y + r1 * y)) : 0.0; },
      200.0);
  CHECK(oracle::moments(xs).mean == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("GIG(1/2) with rho1 = 0 is Gamma(1/2, rate rho2 / 2)") {
  const double rho2 = 3.0;
  const boost::math::gamma_distribution<double> g(0.5, 2.0 / rho2);
  CHECK(oracle::ks_distance(gig_draws(0.0, rho2, 100'000, 9),
                            [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(g, x); }) < 0.02);
}

TEST_CASE("GIG(1/2) rejects bad coefficients") {
  RngStream rng(1, 0);
  CHECK_THROWS_AS(sample_gig_half({1.0, 0.0}, rng), ParameterError);
  CHECK_THROWS_AS(sample_gig_half({-1.0, 1.0}, rng), ParameterError);
}

TEST_CASE("Gaussian from precision") {
  RngStream rng(21, 0);
  const int n = 1'000'000;

  SUBCASE("identity") {
    const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      const auto d = sample_gaussian_from_precision(p, c, rng);
      a[i] = d[0];
      b[i] = d[1];
    }
    for (const auto& xs : {a, b}) {
      const auto m = oracle::moments(xs);
      CHECK(std::abs(m.mean) < 0.01);
      CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
    }
  }

  SUBCASE("one dimension") {
    const Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, 1, 4.0);
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 8.0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_gaussian_from_precision(p, c, rng)[0];
    const auto m = oracle::moments(xs);
    CHECK(m.mean == doctest::Approx(2.0).epsilon(0.01));
    CHECK(m.var == doctest::Approx(0.25).epsilon(0.02));
  }

  SUBCASE("correlated, checked against the dense inverse") {
    Eigen::MatrixXd p(2, 2);
    p << 2, 1, 1, 2;
    const Eigen::Vector2d c(3, 3);
    const Eigen::MatrixXd cov = oracle::dense_inverse(p);
    const Eigen::VectorXd mu = cov * c;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    Eigen::Matrix2d outer = Eigen::Matrix2d::Zero();
    std::vector<Eigen::Vector2d> draws(n);
    for (auto& d : draws) {
      d = sample_gaussian_from_precision(p, c, rng);
      sum += d;
    }
    const Eigen::Vector2d mean = sum / n;
    for (const auto& d : draws) outer += (d - mean) * (d - mean).transpose();
    const Eigen::Matrix2d sample_cov = outer / (n - 1);
    CHECK(mean[0] == doctest::Approx(mu[0]).epsilon(0.02));
    CHECK(mean[1] == doctest::Approx(mu[1]).epsilon(0.02));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) CHECK(sample_cov(i, j) == doctest::Approx(cov(i, j)).epsilon(0.02));
    }
    const Eigen::Matrix2d sample_precision = sample_cov.inverse();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK(sample_precision(i, j) == doctest::Approx(p(i, j)).epsilon(0.05));
      }
    }
  }
}

TEST_CASE("Gaussian from precision reports the failing pivot") {
  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0, 1, 2, 0, 2, 1;
  RngStream rng(1, 0);
  try {
    sample_gaussian_from_precision(p, Eigen::VectorXd::Zero(3), rng);
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    REQUIRE(e.pivot().has_value());
    CHECK(*e.pivot() == 2);
  }
}

TEST_CASE("gamma draws") {
  RngStream rng(4, 0);
  auto draw = [&](double shape, double rate, int n) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_gamma(shape, rate, rng);
    return xs;
  };
  CHECK(oracle::moments(draw(1, 1, 1'000'000)).mean == doctest::Approx(1.0).epsilon(0.01));
  const auto m = oracle::moments(draw(3, 2, 1'000'000));
  CHECK(m.mean == doctest::Approx(1.5).epsilon(0.02));
  CHECK(m.var == doctest::Approx(0.75).epsilon(0.02));
  CHECK(oracle::moments(draw(0.5, 10, 1'000'000)).mean == doctest::Approx(0.05).epsilon(0.02));

  const oracle::GridCdf cdf([](double x) { return 1.5 * std::log(x) - 0.7 * x; }, 1e-10, 1e3, true);
  CHECK(oracle::ks_distance(draw(2.5, 0.7, 100'000), cdf) < 0.02);

  CHECK_THROWS_AS(sample_gamma(0.0, 1.0, rng), ParameterError);
  CHECK_THROWS_AS(sample_gamma(1.0, -1.0, rng), ParameterError);
}

TEST_CASE("inverse-gamma draws") {
  RngStream rng(5, 0);
  auto draw = [&](double shape, double scale, int n) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_inverse_gamma(shape, scale, rng);
    return xs;
  };
  CHECK(oracle::moments(draw(3, 2, 1'000'000)).mean == doctest::Approx(1.0).epsilon(0.02));

  // IG CDF via the gamma relation P(X <= x) = 1 - GammaCDF(1/x; shape, rate = scale).
  auto ig_cdf = [](double shape, double scale) {
    return [=](double x) {
      const boost::math::gamma_distribution<double> g(shape, 1.0 / scale);
      return x <= 0 ? 0.0 : boost::math::cdf(boost::math::complement(g, 1.0 / x));
    };
  };
  CHECK(oracle::ks_distance(draw(2, 2, 100'000), ig_cdf(2, 2)) < 0.01);

  auto heavy = draw(0.5, 1, 1'000'000);
  std::sort(heavy.begin(), heavy.end());
  const double median = heavy[heavy.size() / 2];
  const boost::math::gamma_distribution<double> g(0.5, 1.0);
  const double oracle_median = 1.0 / boost::math::quantile(g, 0.5);
  CHECK(median == doctest::Approx(oracle_median).epsilon(0.01));

  // The grid oracle agrees with the closed form too.
  const oracle::GridCdf grid([](double x) { return -3.0 * std::log(x) - 2.0 / x; }, 1e-6, 1e6, true);
  CHECK(grid(1.0) == doctest::Approx(ig_cdf(2, 2)(1.0)).epsilon(1e-4));

  CHECK_THROWS_AS(sample_inverse_gamma(-0.5, 1.0, rng), ParameterError);
  CHECK_THROWS_AS(sample_inverse_gamma(1.0, 0.0, rng), ParameterError);
}

TEST_CASE("asymmetric Laplace log density") {
  CHECK(ald_logpdf(1.0, 1.0, 1.0, 0.5) == doctest::Approx(-1.386294).epsilon(1e-6));
  CHECK(ald_logpdf(2.0, 1.0, 1.0, 0.5) == doctest::Approx(-1.886294).epsilon(1e-6));
  // log(0.25 * 0.75 / 2) - rho_0.25(-0.5), with rho_0.25(-0.5) = 0.375.
  CHECK(ald_logpdf(-1.0, 0.0, 2.0, 0.25) == doctest::Approx(std::log(0.09375) - 0.375).epsilon(1e-12));
  CHECK(ald_logpdf(-1.0, 0.0, 2.0, 0.25) == doctest::Approx(-2.742124).epsilon(1e-6));

  // Tails decay at rates (1 - p) / sigma and p / sigma, so the window is
  // widened on the slow side to leave e^-50 of mass outside.
  for (double p : {0.1, 0.5, 0.9}) {
    CAPTURE(p);
    const double mu = 0.3, sigma = 0.7;
    // Split at the kink so each piece is smooth.
    auto f = [&](double y) { return std::exp(ald_logpdf(y, mu, sigma, p)); };
    const double total = oracle::integrate(f, mu - 50 * sigma / (1 - p), mu) +
                         oracle::integrate(f, mu, mu + 50 * sigma / p);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    auto f = [](double y) { return std::exp(ald_logpdf(y, 0.0, 1.0, 0.5)); };
    CHECK(oracle::integrate(f, -50, 0) + oracle::integrate(f, 0, 50) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(ald_logpdf(0, 0, 0, 0.5), ParameterError);
  CHECK_THROWS_AS(ald_logpdf(0, 0, 1, 1.0), ParameterError);
}

TEST_CASE("mixture draws put mass p below zero") {
  RngStream rng(17, 0);
  for (double p : {0.25, 0.5, 0.75}) {
    const MixtureConstants c = mixture_constants(p);
    for (double sigma : {0.5, 1.0, 2.0}) {
      const int n = 1'000'000;
      int below = 0;
      for (int i = 0; i < n; ++i) {
        const double v = sample_gamma(1.0, 1.0 / sigma, rng);
        const double e = c.theta * v + c.tau * std::sqrt(sigma * v) * sample_standard_normal(rng);
        below += e <= 0.0;
      }
      CAPTURE(p);
      CAPTURE(sigma);
      CHECK(std::abs(static_cast<double>(below) / n - p) < 0.005);
    }
  }
}

TEST_CASE("uniform draws") {
  RngStream rng(42, 0);
  const int n = 1'000'000;
  double sum = 0.0;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double u = sample_uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    below += u < 0.25;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.002);
  CHECK(std::abs(static_cast<double>(below) / n - 0.25) < 0.002);

  RngStream a(42, 0), b(42, 0);
  CHECK(sample_uniform01(a) == sample_uniform01(b));
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(7, 3), b(7, 3), c(7, 4);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ = differ || x != c();
  }
  CHECK(differ);

  RngStream g1(9, 1), g2(9, 1);
  CHECK(sample_gig_half({1.5, 0.5}, g1) == sample_gig_half({1.5, 0.5}, g2));
  CHECK(sample_gamma(2.0, 3.0, g1) == sample_gamma(2.0, 3.0, g2));
  CHECK(sample_poisson(12.0, g1) == sample_poisson(12.0, g2));
}

TEST_CASE("Poisson draws") {
  RngStream rng(8, 0);
  std::vector<double> xs(200'000);
  for (auto& x : xs) x = static_cast<double>(sample_poisson(3.5, rng));
  const auto m = oracle::moments(xs);
  CHECK(m.mean == doctest::Approx(3.5).epsilon(0.01));
  CHECK(m.var == doctest::Approx(3.5).epsilon(0.02));
  CHECK_THROWS_AS(sample_poisson(-1.0, rng), ParameterError);
  CHECK_THROWS_AS(sample_poisson(1e12, rng), NumericError);
}
