#include "alq/simgen.hpp"

#include <cmath>
#include <map>

#include "alq/distributions.hpp"
#include "alq/errors.hpp"
#include "alq/rng.hpp"

namespace alq {

namespace {

SimulatedPanel generate(int n_subjects, int n_per, std::uint64_t seed, const SimOptions& options,
                        SimDesign design) {
  if (n_subjects < 1 || n_per < 1) throw ParameterError("simulation needs at least one subject and one visit");
  if (options.beta_true.size() < 1) throw ParameterError("simulation needs at least one fixed effect");
  const Index k = options.beta_true.size();
  const Index l = design == SimDesign::kRandomIntercept ? 1 : 2;

  RngStream rng(seed, 0);
  SimulatedPanel out;
  out.truth.beta_true = options.beta_true;
  out.truth.alpha_true = Eigen::MatrixXd(n_subjects, l);
  out.truth.design = design;
  out.data.k = k;
  out.data.l = l;
  out.data.subjects.reserve(static_cast<std::size_t>(n_subjects));

  for (int i = 0; i < n_subjects; ++i) {
    for (Index c = 0; c < l; ++c) {
      out.truth.alpha_true(i, c) = options.random_effect_sd * sample_standard_normal(rng);
    }
    SubjectBlock subject;
    subject.subject_id = std::to_string(i + 1);
    subject.x.resize(n_per, k);
    subject.s.resize(n_per, l);
    subject.y.resize(static_cast<std::size_t>(n_per));
    for (int j = 0; j < n_per; ++j) {
      for (Index c = 0; c < k; ++c) subject.x(j, c) = sample_uniform01(rng);
      subject.s(j, 0) = 1.0;
      if (l == 2) subject.s(j, 1) = sample_uniform01(rng);
      const double eta = subject.x.row(j).dot(options.beta_true) +
                         subject.s.row(j).dot(out.truth.alpha_true.row(i));
      subject.y[j] = sample_poisson(std::exp(eta), rng);
    }
    out.data.subjects.push_back(std::move(subject));
  }
  return out;
}

}  // namespace

SimulatedPanel gen_study1(int n_subjects, int n_per, std::uint64_t seed, const SimOptions& options) {
  return generate(n_subjects, n_per, seed, options, SimDesign::kRandomIntercept);
}

SimulatedPanel gen_study2(int n_subjects, int n_per, std::uint64_t seed, const SimOptions& options) {
  return generate(n_subjects, n_per, seed, options, SimDesign::kRandomInterceptSlope);
}

PanelDataset progabide_covariates(std::span<const ProgabideRecord> records, ProgabideModel model) {
  constexpr Index k = 6;
  const Index l = model == ProgabideModel::kRandomIntercept ? 1 : 2;

  struct Rows {
    std::vector<std::int64_t> y;
    std::vector<Eigen::RowVectorXd> x;
    std::vector<Eigen::RowVectorXd> s;
  };
  std::vector<std::string> order;
  std::map<std::string, Rows> grouped;

  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "record " + std::to_string(r);
    if (!(rec.baseline > 0.0)) throw InputError(where + ": baseline count must be positive");
    if (!(rec.age > 0.0)) throw InputError(where + ": age must be positive");
    if (rec.visit < 1 || rec.visit > 4) throw InputError(where + ": visit must be 1, 2, 3 or 4");
    if (rec.treatment != 0 && rec.treatment != 1) throw InputError(where + ": treatment must be 0 or 1");
    if (rec.seizures < 0) throw InputError(where + ": negative seizure count");

    const double base = std::log(rec.baseline / 4.0);
    const double trt = static_cast<double>(rec.treatment);
    const double visit4 = rec.visit == 4 ? 1.0 : 0.0;
    Eigen::RowVectorXd x(k);
    x << 1.0, base, trt, std::log(rec.age), visit4, base * trt;
    Eigen::RowVectorXd s(l);
    s(0) = 1.0;
    if (l == 2) s(1) = visit4;

    auto [it, inserted] = grouped.try_emplace(rec.subject_id);
    if (inserted) order.push_back(rec.subject_id);
    it->second.y.push_back(rec.seizures);
    it->second.x.push_back(std::move(x));
    it->second.s.push_back(std::move(s));
  }

  PanelDataset data;
  data.k = k;
  data.l = l;
  for (const auto& id : order) {
    auto& rows = grouped.at(id);
    SubjectBlock subject;
    subject.subject_id = id;
    subject.y = std::move(rows.y);
    const auto n = static_cast<Index>(subject.y.size());
    subject.x.resize(n, k);
    subject.s.resize(n, l);
    for (Index j = 0; j < n; ++j) {
      subject.x.row(j) = rows.x[j];
      subject.s.row(j) = rows.s[j];
    }
    data.subjects.push_back(std::move(subject));
  }
  return data;
}

}  // namespace alq
