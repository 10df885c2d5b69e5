#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alq/model.hpp"

namespace alq {

enum class SimDesign { kRandomIntercept, kRandomInterceptSlope };

struct SimTruth {
  Eigen::VectorXd beta_true;
  Eigen::MatrixXd alpha_true;  // N x l
  SimDesign design = SimDesign::kRandomIntercept;
};

struct SimulatedPanel {
  PanelDataset data;
  SimTruth truth;
};

/// Knobs of the simulation designs. Defaults reproduce the reference
/// settings: beta = (1, 3, 5), alpha_i ~ N(0, I_l).
struct SimOptions {
  Eigen::VectorXd beta_true = (Eigen::VectorXd(3) << 1.0, 3.0, 5.0).finished();
  double random_effect_sd = 1.0;
};

/// Random-intercept design: x ~ unif(0,1)^k, s = (1),
/// y ~ Poisson(exp(x'beta + alpha_i)).
SimulatedPanel gen_study1(int n_subjects = 20, int n_per = 5, std::uint64_t seed = 0,
                          const SimOptions& options = {});

/// Random intercept and slope: s = (1, s1) with s1 ~ unif(0,1),
/// alpha_i ~ N(0, I_2) independent components.
SimulatedPanel gen_study2(int n_subjects = 20, int n_per = 5, std::uint64_t seed = 0,
                          const SimOptions& options = {});

/// One clinic visit of the epilepsy trial layout.
struct ProgabideRecord {
  std::string subject_id;
  double baseline = 0.0;  // seizures in the 8 weeks before randomization
  double age = 0.0;
  int treatment = 0;      // 1 for the active arm
  int visit = 1;          // 1..4
  std::int64_t seizures = 0;
};

enum class ProgabideModel {
  kRandomIntercept,       // s = (1)
  kRandomInterceptVisit,  // s = (1, Visit4)
};

/// Builds x = (1, Base, Trt, LnAge, Visit4, Base * Trt) with Base = ln(baseline / 4)
/// and LnAge = ln(age). Records are grouped by subject in first-seen order.
PanelDataset progabide_covariates(std::span<const ProgabideRecord> records, ProgabideModel model);

}  // namespace alq
