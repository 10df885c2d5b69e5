#include "alq/cli/summary_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "alq/errors.hpp"

namespace alq::cli {

namespace {

using Json = nlohmann::ordered_json;

Json coefficient_json(const CoefficientSummary& c) {
  return Json{{"name", c.name},
              {"avg_post_mean", c.avg_post_mean},
              {"pooled_sd", c.pooled_sd},
              {"ci_low", c.avg_ci_low},
              {"ci_high", c.avg_ci_high}};
}

CoefficientSummary coefficient_from(const Json& j) {
  return {j.at("name").get<std::string>(), j.at("avg_post_mean").get<double>(),
          j.at("pooled_sd").get<double>(), j.at("ci_low").get<double>(),
          j.at("ci_high").get<double>()};
}

}  // namespace

void write_summary_json(std::ostream& out, const PosteriorSummary& summary) {
  Json doc;
  doc["quantile"] = summary.quantile;
  doc["level"] = summary.level;
  doc["m_jitter"] = summary.m_jitter;
  doc["retained_draws"] = summary.retained_draws;
  doc["dimensions"] = Json{{"k", summary.coefficients.size()},
                           {"l", summary.alpha_mean.cols()}};
  doc["coefficients"] = Json::array();
  for (const auto& c : summary.coefficients) doc["coefficients"].push_back(coefficient_json(c));
  doc["hyperparameters"] = Json::array();
  for (const auto& c : summary.hyperparameters) {
    doc["hyperparameters"].push_back(coefficient_json(c));
  }
  doc["model"] = Json{{"avg_nll", summary.avg_nll},
                      {"avg_dic", summary.avg_dic},
                      {"avg_p_d", summary.avg_p_d}};
  doc["random_effects"] = Json::array();
  for (std::size_t i = 0; i < summary.subject_ids.size(); ++i) {
    Json alpha = Json::array();
    for (Index c = 0; c < summary.alpha_mean.cols(); ++c) {
      alpha.push_back(summary.alpha_mean(static_cast<Index>(i), c));
    }
    doc["random_effects"].push_back(Json{{"subject", summary.subject_ids[i]}, {"alpha_mean", alpha}});
  }
  out << doc.dump(2) << '\n';
}

PosteriorSummary read_summary_json(std::istream& in) {
  try {
    const Json doc = Json::parse(in);
    PosteriorSummary summary;
    summary.quantile = doc.at("quantile").get<double>();
    summary.level = doc.at("level").get<double>();
    summary.m_jitter = doc.at("m_jitter").get<int>();
    summary.retained_draws = doc.at("retained_draws").get<std::int64_t>();
    const auto k = doc.at("dimensions").at("k").get<Index>();
    const auto l = doc.at("dimensions").at("l").get<Index>();
    for (const auto& c : doc.at("coefficients")) summary.coefficients.push_back(coefficient_from(c));
    if (static_cast<Index>(summary.coefficients.size()) != k) {
      throw InputError("summary lists " + std::to_string(summary.coefficients.size()) +
                       " coefficients but k = " + std::to_string(k));
    }
    for (const auto& c : doc.at("hyperparameters")) {
      summary.hyperparameters.push_back(coefficient_from(c));
    }
    summary.avg_nll = doc.at("model").at("avg_nll").get<double>();
    summary.avg_dic = doc.at("model").at("avg_dic").get<double>();
    summary.avg_p_d = doc.at("model").at("avg_p_d").get<double>();
    const auto& effects = doc.at("random_effects");
    summary.alpha_mean.resize(static_cast<Index>(effects.size()), l);
    Index i = 0;
    for (const auto& e : effects) {
      summary.subject_ids.push_back(e.at("subject").get<std::string>());
      const auto& alpha = e.at("alpha_mean");
      if (static_cast<Index>(alpha.size()) != l) {
        throw InputError("random effect of subject " + summary.subject_ids.back() +
                         " has the wrong length");
      }
      for (Index c = 0; c < l; ++c) summary.alpha_mean(i, c) = alpha.at(c).get<double>();
      ++i;
    }
    return summary;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed summary: ") + e.what());
  }
}

}  // namespace alq::cli
