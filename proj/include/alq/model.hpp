#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace alq {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Repeated measurements of one subject. Row j of `x` and `s` belongs to y[j].
struct SubjectBlock {
  std::string subject_id;
  std::vector<std::int64_t> y;
  MatrixXd x;  // n_i x k, fixed-effect covariates
  MatrixXd s;  // n_i x l, random-effect covariates

  Index size() const { return static_cast<Index>(y.size()); }
};

/// Long-format panel grouped by subject. No intercept column is ever added
/// on the caller's behalf.
struct PanelDataset {
  std::vector<SubjectBlock> subjects;
  Index k = 0;
  Index l = 0;

  Index n_subjects() const { return static_cast<Index>(subjects.size()); }
  // Sum of n_i over subjects; panels may be unbalanced.
  Index n_total() const;
};

struct QuantileSpec {
  double p = 0.5;
  double zeta = 1e-5;
  int m_jitter = 20;
  std::int64_t iterations = 12000;
  std::int64_t burn_in = 2000;
  std::uint64_t master_seed = 0;

  // Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Hyperparameters: lambda^2 ~ Gamma(a1, rate a2), phi^2 ~ IG(b1, scale b2),
/// sigma ~ IG(c1, scale c2). The defaults are the weak priors of the
/// simulation studies, including the improper IG(-0.5, 0).
struct PriorConfig {
  double a1 = 0.01;
  double a2 = 0.01;
  double b1 = -0.5;
  double b2 = 0.0;
  double c1 = -0.5;
  double c2 = 0.0;

  void validate() const;
};

/// theta and tau of the normal-exponential mixture at quantile level p.
struct MixtureConstants {
  double theta = 0.0;
  double tau = 0.0;

  double tau2() const { return tau * tau; }
};

/// Full parameter set of one Gibbs iteration. `v` and `z` are stored flat in
/// subject order (subject 0 rows first), `alpha` is N x l.
struct ChainState {
  VectorXd beta;
  MatrixXd alpha;
  VectorXd v;
  double sigma = 1.0;
  double phi2 = 1.0;
  VectorXd g2;
  double lambda2 = 1.0;
  VectorXd z;

  // Starting point: beta = 0, alpha = 0, sigma = phi2 = lambda2 = 1, g2 = 1,
  // v = 1. z is left at 0 and overwritten by the first sweep.
  static ChainState initial(const PanelDataset& data);

  bool satisfies_invariants() const;
};

/// rho_p(u) = u * (p - I(u < 0)).
double check_loss(double u, double p);

MixtureConstants mixture_constants(double p);

enum class ViolationKind {
  kEmptySubject,
  kDimensionMismatch,
  kNegativeCount,
  kTooFewObservations,
  kNonFiniteCovariate,
};

struct Violation {
  ViolationKind kind;
  std::string subject_id;  // empty for dataset-level violations
  Index row = -1;          // -1 when not tied to a row
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Lists every invariant violation of `data`. Never throws.
ValidationReport validate_dataset(const PanelDataset& data);

}  // namespace alq
