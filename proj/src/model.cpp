#include "alq/model.hpp"

#include <cmath>
#include <sstream>

#include "alq/errors.hpp"

namespace alq {

Index PanelDataset::n_total() const {
  Index n = 0;
  for (const auto& subject : subjects) n += subject.size();
  return n;
}

void QuantileSpec::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile level p must lie in (0, 1)");
  if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("zeta must lie in (0, 1)");
  if (m_jitter < 2) throw ConfigError("m_jitter must be at least 2");
  if (burn_in < 0) throw ConfigError("burn_in must be non-negative");
  if (burn_in >= iterations) throw ConfigError("burn_in must be smaller than iterations");
}

void PriorConfig::validate() const {
  if (!(a1 > 0.0 && a2 > 0.0)) throw ConfigError("lambda^2 prior needs a1 > 0 and a2 > 0");
  auto ig_ok = [](double shape, double scale) {
    const bool improper = shape == -0.5 && scale == 0.0;
    return improper || (shape > 0.0 && scale > 0.0);
  };
  if (!ig_ok(b1, b2)) throw ConfigError("phi^2 prior must be IG(-0.5, 0) or a proper IG");
  if (!ig_ok(c1, c2)) throw ConfigError("sigma prior must be IG(-0.5, 0) or a proper IG");
}

ChainState ChainState::initial(const PanelDataset& data) {
  ChainState state;
  state.beta = VectorXd::Zero(data.k);
  state.alpha = MatrixXd::Zero(data.n_subjects(), data.l);
  state.v = VectorXd::Ones(data.n_total());
  state.sigma = 1.0;
  state.phi2 = 1.0;
  state.g2 = VectorXd::Ones(data.k);
  state.lambda2 = 1.0;
  state.z = VectorXd::Zero(data.n_total());
  return state;
}

bool ChainState::satisfies_invariants() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(sigma) || !positive(phi2) || !positive(lambda2)) return false;
  for (double x : v) {
    if (!positive(x)) return false;
  }
  for (double x : g2) {
    if (!positive(x)) return false;
  }
  return z.allFinite() && beta.allFinite() && alpha.allFinite();
}

double check_loss(double u, double p) { return u < 0.0 ? u * (p - 1.0) : u * p; }

MixtureConstants mixture_constants(double p) {
  const double pq = p * (1.0 - p);
  return {(1.0 - 2.0 * p) / pq, std::sqrt(2.0 / pq)};
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.message << '\n';
  return out.str();
}

ValidationReport validate_dataset(const PanelDataset& data) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, const std::string& id, Index row, std::string msg) {
    report.violations.push_back({kind, id, row, std::move(msg)});
  };

  for (const auto& subject : data.subjects) {
    const auto& id = subject.subject_id;
    const Index n = subject.size();
    if (n == 0) {
      add(ViolationKind::kEmptySubject, id, -1, "subject " + id + " has no observations");
      continue;
    }
    if (subject.x.rows() != n || subject.s.rows() != n) {
      add(ViolationKind::kDimensionMismatch, id, -1,
          "subject " + id + ": y has " + std::to_string(n) + " rows but x has " +
              std::to_string(subject.x.rows()) + " and s has " + std::to_string(subject.s.rows()));
    }
    if (subject.x.cols() != data.k) {
      // Covariate matrices are rectangular, so a column mismatch affects every
      // row; it is reported once against the first row.
      add(ViolationKind::kDimensionMismatch, id, 0,
          "subject " + id + " row 0: x row has length " + std::to_string(subject.x.cols()) +
              ", expected k = " + std::to_string(data.k));
    }
    if (subject.s.cols() != data.l) {
      add(ViolationKind::kDimensionMismatch, id, 0,
          "subject " + id + " row 0: s row has length " + std::to_string(subject.s.cols()) +
              ", expected l = " + std::to_string(data.l));
    }
    for (Index j = 0; j < n; ++j) {
      if (subject.y[j] < 0) {
        add(ViolationKind::kNegativeCount, id, j,
            "subject " + id + " row " + std::to_string(j) + ": negative count " +
                std::to_string(subject.y[j]));
      }
    }
    if (!subject.x.allFinite() || !subject.s.allFinite()) {
      add(ViolationKind::kNonFiniteCovariate, id, -1, "subject " + id + " has non-finite covariates");
    }
  }

  if (data.n_total() < data.k) {
    add(ViolationKind::kTooFewObservations, "", -1,
        "total observation count " + std::to_string(data.n_total()) + " is below k = " +
            std::to_string(data.k));
  }
  return report;
}

}  // namespace alq
