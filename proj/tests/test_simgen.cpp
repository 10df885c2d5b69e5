#include <doctest.h>

#include <cmath>
#include <vector>

#include "alq/errors.hpp"
#include "alq/simgen.hpp"

using namespace alq;

namespace {

std::vector<std::int64_t> all_counts(const PanelDataset& data) {
  std::vector<std::int64_t> ys;
  for (const auto& s : data.subjects) ys.insert(ys.end(), s.y.begin(), s.y.end());
  return ys;
}

bool same_panel(const SimulatedPanel& a, const SimulatedPanel& b) {
  if (a.data.subjects.size() != b.data.subjects.size()) return false;
  for (std::size_t i = 0; i < a.data.subjects.size(); ++i) {
    const auto& x = a.data.subjects[i];
    const auto& y = b.data.subjects[i];
    if (x.y != y.y || x.x != y.x || x.s != y.s || x.subject_id != y.subject_id) return false;
  }
  return a.truth.alpha_true == b.truth.alpha_true;
}

}  // namespace

TEST_CASE("study 1 defaults") {
  const auto sim = gen_study1();
  CHECK(sim.data.n_total() == 100);
  CHECK(sim.data.n_subjects() == 20);
  CHECK(sim.data.k == 3);
  CHECK(sim.data.l == 1);
  CHECK(validate_dataset(sim.data).ok());
  CHECK(sim.truth.beta_true == Eigen::Vector3d(1.0, 3.0, 5.0));
  CHECK(sim.truth.alpha_true.rows() == 20);
  CHECK(sim.truth.alpha_true.cols() == 1);
  CHECK(sim.truth.design == SimDesign::kRandomIntercept);
  for (const auto& s : sim.data.subjects) {
    CHECK((s.s.array() == 1.0).all());
    CHECK(s.x.minCoeff() >= 0.0);
    CHECK(s.x.maxCoeff() < 1.0);
  }
}

TEST_CASE("unit-rate variant") {
  SimOptions options;
  options.beta_true = Eigen::Vector3d::Zero();
  options.random_effect_sd = 0.0;
  const auto sim = gen_study1(100, 100, 4, options);
  const auto ys = all_counts(sim.data);
  double total = 0.0;
  for (auto y : ys) total += static_cast<double>(y);
  CHECK(total / static_cast<double>(ys.size()) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("counts are right-skewed") {
  const auto ys = all_counts(gen_study1(20, 5, 12).data);
  double m = 0.0;
  for (auto y : ys) m += static_cast<double>(y);
  m /= static_cast<double>(ys.size());
  double m2 = 0.0, m3 = 0.0;
  for (auto y : ys) {
    const double d = static_cast<double>(y) - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(ys.size());
  m3 /= static_cast<double>(ys.size());
  CHECK(m > 0.0);
  CHECK(m3 / std::pow(m2, 1.5) > 0.0);
}

TEST_CASE("generators are reproducible and seed sensitive") {
  CHECK(same_panel(gen_study1(20, 5, 42), gen_study1(20, 5, 42)));
  CHECK(same_panel(gen_study2(20, 5, 42), gen_study2(20, 5, 42)));
  const auto ref = all_counts(gen_study1(20, 5, 100).data);
  for (std::uint64_t seed = 101; seed <= 105; ++seed) {
    CHECK(all_counts(gen_study1(20, 5, seed).data) != ref);
  }
  CHECK_THROWS_AS(gen_study1(0, 5, 1), ParameterError);
  CHECK_THROWS_AS(gen_study2(3, 0, 1), ParameterError);
}

TEST_CASE("study 2 design") {
  const auto sim = gen_study2();
  CHECK(sim.data.n_total() == 100);
  CHECK(sim.data.k == 3);
  CHECK(sim.data.l == 2);
  CHECK(sim.truth.alpha_true.cols() == 2);
  CHECK(sim.truth.design == SimDesign::kRandomInterceptSlope);
  const auto small = gen_study2(10, 3, 1);
  CHECK(small.data.n_total() == 30);
  for (const auto& s : sim.data.subjects) {
    CHECK((s.s.col(0).array() == 1.0).all());
    CHECK(s.s.col(1).minCoeff() >= 0.0);
    CHECK(s.s.col(1).maxCoeff() < 1.0);
  }
}

TEST_CASE("epilepsy covariates") {
  const double age = std::exp(3.0);
  const std::vector<ProgabideRecord> recs{
      {"101", 8.0, age, 1, 4, 3},
      {"102", 20.0, 30.0, 0, 2, 5},
      {"101", 8.0, age, 1, 1, 2},
  };
  const auto data = progabide_covariates(recs, ProgabideModel::kRandomInterceptVisit);
  CHECK(data.k == 6);
  CHECK(data.l == 2);
  REQUIRE(data.n_subjects() == 2);
  CHECK(data.subjects[0].subject_id == "101");
  CHECK(data.subjects[0].size() == 2);

  const Eigen::RowVectorXd row = data.subjects[0].x.row(0);
  const double ln2 = std::log(2.0);
  CHECK(row[0] == 1.0);
  CHECK(row[1] == doctest::Approx(ln2).epsilon(1e-15));
  CHECK(row[2] == 1.0);
  CHECK(row[3] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(row[4] == 1.0);
  CHECK(row[5] == doctest::Approx(ln2).epsilon(1e-15));
  CHECK(data.subjects[0].s(0, 1) == 1.0);
  CHECK(data.subjects[0].s(1, 1) == 0.0);
  CHECK(data.subjects[0].y == std::vector<std::int64_t>{3, 2});

  const Eigen::RowVectorXd control = data.subjects[1].x.row(0);
  CHECK(control[5] == 0.0);
  CHECK(control[4] == 0.0);
  CHECK(control[1] == doctest::Approx(std::log(5.0)));

  const auto intercept = progabide_covariates(recs, ProgabideModel::kRandomIntercept);
  CHECK(intercept.l == 1);

  std::vector<ProgabideRecord> bad = recs;
  bad[2].baseline = 0.0;
  CHECK_THROWS_WITH_AS(progabide_covariates(bad, ProgabideModel::kRandomIntercept),
                       doctest::Contains("record 2"), InputError);
  bad = recs;
  bad[1].age = -1.0;
  CHECK_THROWS_AS(progabide_covariates(bad, ProgabideModel::kRandomIntercept), InputError);
  bad = recs;
  bad[0].visit = 5;
  CHECK_THROWS_AS(progabide_covariates(bad, ProgabideModel::kRandomIntercept), InputError);
}
