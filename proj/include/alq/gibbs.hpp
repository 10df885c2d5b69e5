#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "alq/model.hpp"
#include "alq/rng.hpp"

namespace alq {

/// Which full conditional is used for sigma.
enum class SigmaConditional {
  // Conditional of the joint posterior: the normal kernel and the
  // exponential mixing density both contribute, giving
  // IG(3 n / 2 + c1, Q / (2 tau^2) + sum(v) + c2).
  kJointConsistent,
  // Normal kernel only: IG(n / 2 + c1, Q / (2 tau^2) + c2). Kept for
  // comparison runs; it does not leave the joint posterior invariant.
  kLikelihoodOnly,
};

struct GibbsConfig {
  std::int64_t iterations = 12000;
  std::int64_t burn_in = 2000;
  std::int64_t thin = 1;
  bool record_latents = false;  // keep v and z in recorded draws
  SigmaConditional sigma_conditional = SigmaConditional::kJointConsistent;

  static GibbsConfig from(const QuantileSpec& spec);
  void validate() const;
  std::int64_t retained() const { return (iterations - burn_in) / thin; }
};

/// Recorded states of one chain after burn-in and thinning.
struct ChainOutput {
  int jitter_index = 0;
  std::vector<ChainState> draws;
  std::vector<std::int64_t> iterations;  // 1-based sweep index of each draw
  std::vector<double> deviance;          // -2 * AL log-likelihood of that sweep's z

  Index size() const { return static_cast<Index>(draws.size()); }
};

struct InverseGammaParams {
  double shape = 0.0;
  double scale = 0.0;
};

struct GammaParams {
  double shape = 0.0;
  double rate = 0.0;
};

/// Gaussian full conditional in information form: N(P^{-1} c, P^{-1}).
struct GaussianConditional {
  Eigen::MatrixXd precision;
  Eigen::VectorXd linear_term;
};

/// x_ij' beta + s_ij' alpha_i for every observation, flat in subject order.
Eigen::VectorXd fitted_values(const PanelDataset& data, const Eigen::VectorXd& beta,
                              const Eigen::MatrixXd& alpha);

/// -2 * sum_ij log ALD(z_ij | fitted_ij, sigma, p).
double al_deviance(const PanelDataset& data, const Eigen::VectorXd& z, const Eigen::VectorXd& beta,
                   const Eigen::MatrixXd& alpha, double sigma, double p);

// Conditional parameters, exposed so tests can check them against
// independent algebra.
InverseGammaParams sigma_conditional_params(const ChainState& state, const PanelDataset& data,
                                            const MixtureConstants& constants,
                                            const PriorConfig& priors,
                                            SigmaConditional variant);
InverseGammaParams phi2_conditional_params(const ChainState& state, const PriorConfig& priors);
GammaParams lambda2_conditional_params(const ChainState& state, const PriorConfig& priors);
GaussianConditional beta_conditional(const ChainState& state, const PanelDataset& data,
                                     const MixtureConstants& constants);
GaussianConditional alpha_conditional(const ChainState& state, const PanelDataset& data,
                                      const MixtureConstants& constants, Index subject);

// Step 1: fresh jitter of every count, mapped to the latent scale.
Eigen::VectorXd update_latent_z(const PanelDataset& data, double p, double zeta, RngStream& rng);

// Step 2: v_ij ~ GIG(1/2, r_ij^2 / (tau^2 sigma), theta^2 / (tau^2 sigma) + 2 / sigma).
Eigen::VectorXd update_v(const ChainState& state, const PanelDataset& data,
                         const MixtureConstants& constants, RngStream& rng);

// Step 3.
double update_sigma(const ChainState& state, const PanelDataset& data,
                    const MixtureConstants& constants, const PriorConfig& priors, RngStream& rng,
                    SigmaConditional variant = SigmaConditional::kJointConsistent);

// Step 4: beta | alpha, using per-observation weights 1 / (tau^2 sigma v_ij).
Eigen::VectorXd update_beta(const ChainState& state, const PanelDataset& data,
                            const MixtureConstants& constants, RngStream& rng);

// Step 5: g2_h ~ GIG(1/2, beta_h^2, lambda^2).
Eigen::VectorXd update_g2(const ChainState& state, RngStream& rng);

// Step 6: lambda^2 ~ Gamma(k + a1, sum(g2) / 2 + a2).
double update_lambda2(const ChainState& state, const PriorConfig& priors, RngStream& rng);

// Step 7: alpha_i | beta per subject, prior precision I_l / phi^2.
Eigen::MatrixXd update_alpha(const ChainState& state, const PanelDataset& data,
                             const MixtureConstants& constants, RngStream& rng);

// Step 8: phi^2 ~ IG(N l / 2 + b1, sum_i alpha_i' alpha_i / 2 + b2).
double update_phi2(const ChainState& state, const PriorConfig& priors, RngStream& rng);

/// Runs steps 1-8 in order for `config.iterations` sweeps on one jitter
/// replicate. Deterministic given the stream. Any failure is rethrown as a
/// ChainError carrying `jitter_index` and the sweep number.
ChainOutput run_chain(const PanelDataset& data, double p, double zeta, const PriorConfig& priors,
                      const GibbsConfig& config, int jitter_index, RngStream& rng);

}  // namespace alq
