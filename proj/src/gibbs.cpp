#include "alq/gibbs.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "alq/distributions.hpp"
#include "alq/errors.hpp"
#include "alq/jitter.hpp"

namespace alq {

namespace {

constexpr double kVarianceFloor = 1e-300;

// Variance-like draws below the floor are redrawn once, then rejected.
template <typename Draw>
double draw_above_floor(Draw&& draw, const char* what) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double value = draw();
    if (value >= kVarianceFloor && std::isfinite(value)) return value;
  }
  throw NumericError(std::string(what) + " draw fell below 1e-300 twice");
}

double residual_sum_of_squares(const ChainState& state, const PanelDataset& data,
                               const MixtureConstants& constants) {
  const Eigen::VectorXd fitted = fitted_values(data, state.beta, state.alpha);
  double total = 0.0;
  for (Index t = 0; t < fitted.size(); ++t) {
    const double r = state.z[t] - fitted[t] - constants.theta * state.v[t];
    total += r * r / state.v[t];
  }
  return total;
}

}  // namespace

GibbsConfig GibbsConfig::from(const QuantileSpec& spec) {
  GibbsConfig config;
  config.iterations = spec.iterations;
  config.burn_in = spec.burn_in;
  return config;
}

void GibbsConfig::validate() const {
  if (burn_in < 0) throw ConfigError("burn_in must be non-negative");
  if (burn_in >= iterations) throw ConfigError("burn_in must be smaller than iterations");
  if (thin < 1) throw ConfigError("thin must be at least 1");
}

Eigen::VectorXd fitted_values(const PanelDataset& data, const Eigen::VectorXd& beta,
                              const Eigen::MatrixXd& alpha) {
  Eigen::VectorXd fitted(data.n_total());
  Index pos = 0;
  for (Index i = 0; i < data.n_subjects(); ++i) {
    const auto& subject = data.subjects[i];
    const Index n = subject.size();
    fitted.segment(pos, n).noalias() = subject.x * beta;
    fitted.segment(pos, n).noalias() += subject.s * alpha.row(i).transpose();
    pos += n;
  }
  return fitted;
}

double al_deviance(const PanelDataset& data, const Eigen::VectorXd& z, const Eigen::VectorXd& beta,
                   const Eigen::MatrixXd& alpha, double sigma, double p) {
  const Eigen::VectorXd fitted = fitted_values(data, beta, alpha);
  double loss = 0.0;
  for (Index t = 0; t < fitted.size(); ++t) loss += check_loss(z[t] - fitted[t], p);
  const double n = static_cast<double>(fitted.size());
  return -2.0 * (n * std::log(p * (1.0 - p) / sigma) - loss / sigma);
}

InverseGammaParams sigma_conditional_params(const ChainState& state, const PanelDataset& data,
                                            const MixtureConstants& constants,
                                            const PriorConfig& priors,
                                            SigmaConditional variant) {
  const double n = static_cast<double>(data.n_total());
  const double quadratic = residual_sum_of_squares(state, data, constants) / (2.0 * constants.tau2());
  if (variant == SigmaConditional::kLikelihoodOnly) {
    return {0.5 * n + priors.c1, quadratic + priors.c2};
  }
  return {1.5 * n + priors.c1, quadratic + state.v.sum() + priors.c2};
}

InverseGammaParams phi2_conditional_params(const ChainState& state, const PriorConfig& priors) {
  const double entries = static_cast<double>(state.alpha.size());
  return {0.5 * entries + priors.b1, 0.5 * state.alpha.squaredNorm() + priors.b2};
}

GammaParams lambda2_conditional_params(const ChainState& state, const PriorConfig& priors) {
  return {static_cast<double>(state.g2.size()) + priors.a1, 0.5 * state.g2.sum() + priors.a2};
}

GaussianConditional beta_conditional(const ChainState& state, const PanelDataset& data,
                                     const MixtureConstants& constants) {
  const Index k = data.k;
  GaussianConditional out{Eigen::MatrixXd::Zero(k, k), Eigen::VectorXd::Zero(k)};
  const double scale = 1.0 / (constants.tau2() * state.sigma);
  Index pos = 0;
  for (Index i = 0; i < data.n_subjects(); ++i) {
    const auto& subject = data.subjects[i];
    const Eigen::VectorXd random_part = subject.s * state.alpha.row(i).transpose();
    for (Index j = 0; j < subject.size(); ++j, ++pos) {
      const double weight = scale / state.v[pos];
      const double target = state.z[pos] - random_part[j] - constants.theta * state.v[pos];
      const auto row = subject.x.row(j);
      out.precision.noalias() += weight * row.transpose() * row;
      out.linear_term.noalias() += (weight * target) * row.transpose();
    }
  }
  out.precision.diagonal().array() += state.g2.array().inverse();
  return out;
}

GaussianConditional alpha_conditional(const ChainState& state, const PanelDataset& data,
                                      const MixtureConstants& constants, Index subject_index) {
  const Index l = data.l;
  GaussianConditional out{Eigen::MatrixXd::Zero(l, l), Eigen::VectorXd::Zero(l)};
  Index pos = 0;
  for (Index i = 0; i < subject_index; ++i) pos += data.subjects[i].size();

  const auto& subject = data.subjects[subject_index];
  const double scale = 1.0 / (constants.tau2() * state.sigma);
  const Eigen::VectorXd fixed_part = subject.x * state.beta;
  for (Index j = 0; j < subject.size(); ++j, ++pos) {
    const double weight = scale / state.v[pos];
    const double target = state.z[pos] - fixed_part[j] - constants.theta * state.v[pos];
    const auto row = subject.s.row(j);
    out.precision.noalias() += weight * row.transpose() * row;
    out.linear_term.noalias() += (weight * target) * row.transpose();
  }
  out.precision.diagonal().array() += 1.0 / state.phi2;
  return out;
}

Eigen::VectorXd update_latent_z(const PanelDataset& data, double p, double zeta, RngStream& rng) {
  return jitter_latent(data, p, zeta, 0, rng).z;
}

Eigen::VectorXd update_v(const ChainState& state, const PanelDataset& data,
                         const MixtureConstants& constants, RngStream& rng) {
  const Eigen::VectorXd fitted = fitted_values(data, state.beta, state.alpha);
  const double tau2_sigma = constants.tau2() * state.sigma;
  const double rho2 = constants.theta * constants.theta / tau2_sigma + 2.0 / state.sigma;
  Eigen::VectorXd v(fitted.size());
  for (Index t = 0; t < fitted.size(); ++t) {
    const double r = state.z[t] - fitted[t];
    const GigHalfParams params{r * r / tau2_sigma, rho2};
    v[t] = draw_above_floor([&] { return sample_gig_half(params, rng); }, "v");
  }
  return v;
}

double update_sigma(const ChainState& state, const PanelDataset& data,
                    const MixtureConstants& constants, const PriorConfig& priors, RngStream& rng,
                    SigmaConditional variant) {
  const auto params = sigma_conditional_params(state, data, constants, priors, variant);
  if (!(params.shape > 0.0)) {
    throw ConfigError("sigma conditional has non-positive shape " + std::to_string(params.shape));
  }
  return draw_above_floor([&] { return sample_inverse_gamma(params.shape, params.scale, rng); },
                          "sigma");
}

Eigen::VectorXd update_beta(const ChainState& state, const PanelDataset& data,
                            const MixtureConstants& constants, RngStream& rng) {
  const auto conditional = beta_conditional(state, data, constants);
  return sample_gaussian_from_precision(conditional.precision, conditional.linear_term, rng);
}

Eigen::VectorXd update_g2(const ChainState& state, RngStream& rng) {
  Eigen::VectorXd g2(state.beta.size());
  for (Index h = 0; h < g2.size(); ++h) {
    const GigHalfParams params{state.beta[h] * state.beta[h], state.lambda2};
    g2[h] = draw_above_floor([&] { return sample_gig_half(params, rng); }, "g2");
  }
  return g2;
}

double update_lambda2(const ChainState& state, const PriorConfig& priors, RngStream& rng) {
  const auto params = lambda2_conditional_params(state, priors);
  return draw_above_floor([&] { return sample_gamma(params.shape, params.rate, rng); }, "lambda2");
}

Eigen::MatrixXd update_alpha(const ChainState& state, const PanelDataset& data,
                             const MixtureConstants& constants, RngStream& rng) {
  Eigen::MatrixXd alpha(data.n_subjects(), data.l);
  for (Index i = 0; i < data.n_subjects(); ++i) {
    const auto conditional = alpha_conditional(state, data, constants, i);
    alpha.row(i) =
        sample_gaussian_from_precision(conditional.precision, conditional.linear_term, rng)
            .transpose();
  }
  return alpha;
}

double update_phi2(const ChainState& state, const PriorConfig& priors, RngStream& rng) {
  const auto params = phi2_conditional_params(state, priors);
  if (!(params.shape > 0.0)) {
    throw ConfigError("phi2 conditional has non-positive shape " + std::to_string(params.shape));
  }
  return draw_above_floor([&] { return sample_inverse_gamma(params.shape, params.scale, rng); },
                          "phi2");
}

ChainOutput run_chain(const PanelDataset& data, double p, double zeta, const PriorConfig& priors,
                      const GibbsConfig& config, int jitter_index, RngStream& rng) {
  config.validate();
  const MixtureConstants constants = mixture_constants(p);
  const double n = static_cast<double>(data.n_total());
  const double sigma_shape =
      (config.sigma_conditional == SigmaConditional::kJointConsistent ? 1.5 : 0.5) * n + priors.c1;
  if (!(sigma_shape > 0.0)) throw ConfigError("sigma posterior shape is not positive");
  if (!(0.5 * static_cast<double>(data.n_subjects() * data.l) + priors.b1 > 0.0)) {
    throw ConfigError("phi2 posterior shape is not positive");
  }

  ChainOutput output;
  output.jitter_index = jitter_index;
  const auto retained = static_cast<std::size_t>(config.retained());
  output.draws.reserve(retained);
  output.iterations.reserve(retained);
  output.deviance.reserve(retained);

  ChainState state = ChainState::initial(data);
  for (std::int64_t it = 1; it <= config.iterations; ++it) {
    try {
      state.z = update_latent_z(data, p, zeta, rng);
      state.v = update_v(state, data, constants, rng);
      state.sigma = update_sigma(state, data, constants, priors, rng, config.sigma_conditional);
      state.beta = update_beta(state, data, constants, rng);
      state.g2 = update_g2(state, rng);
      state.lambda2 = update_lambda2(state, priors, rng);
      state.alpha = update_alpha(state, data, constants, rng);
      state.phi2 = update_phi2(state, priors, rng);
    } catch (const ChainError&) {
      throw;
    } catch (const Error& e) {
      throw ChainError(e.what(), jitter_index, it);
    }
    assert(state.satisfies_invariants());

    if (it > config.burn_in && (it - config.burn_in) % config.thin == 0) {
      output.deviance.push_back(al_deviance(data, state.z, state.beta, state.alpha, state.sigma, p));
      output.iterations.push_back(it);
      output.draws.push_back(state);
      if (!config.record_latents) {
        output.draws.back().v.resize(0);
        output.draws.back().z.resize(0);
      }
    }
  }
  return output;
}

}  // namespace alq
