#include "alq/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "alq/cli/panel_csv.hpp"
#include "alq/cli/summary_io.hpp"
#include "alq/diagnostics.hpp"
#include "alq/errors.hpp"
#include "alq/jitter.hpp"
#include "alq/simgen.hpp"
#include "alq/stats.hpp"

namespace alq::cli {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw InputError("failed writing " + path.string());
}

// "beta[1]" -> "beta1", used for artifact file names.
std::string file_stem(std::string_view selector) {
  std::string stem;
  for (char c : selector) {
    if (c != '[' && c != ']') stem.push_back(c);
  }
  return stem;
}

void write_truth(std::ostream& out, const SimulatedPanel& panel, const SimulateConfig& config) {
  Json doc;
  doc["design"] = config.design == Design::kStudy1 ? "study1" : "study2";
  doc["seed"] = config.seed;
  doc["beta_true"] = Json::array();
  for (Index h = 0; h < panel.truth.beta_true.size(); ++h) {
    doc["beta_true"].push_back(panel.truth.beta_true[h]);
  }
  doc["alpha_true"] = Json::array();
  for (Index i = 0; i < panel.truth.alpha_true.rows(); ++i) {
    Json row = Json::array();
    for (Index c = 0; c < panel.truth.alpha_true.cols(); ++c) row.push_back(panel.truth.alpha_true(i, c));
    doc["alpha_true"].push_back(Json{{"subject", panel.data.subjects[i].subject_id}, {"alpha", row}});
  }
  out << doc.dump(2) << '\n';
}

int threads_from_env() {
  const char* raw = std::getenv("ALQ_PANEL_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  const std::string_view text(raw);
  int threads = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || ptr != text.data() + text.size() || threads < 1) {
    throw ConfigError("ALQ_PANEL_THREADS must be a positive integer, got '" + std::string(text) + "'");
  }
  return threads;
}

}  // namespace

std::string quantile_dir_name(double p) { return "p" + format_double(p); }

void cmd_simulate(const SimulateConfig& config, std::ostream& out) {
  const SimulatedPanel panel = config.design == Design::kStudy1
                                   ? gen_study1(config.subjects, config.per_subject, config.seed)
                                   : gen_study2(config.subjects, config.per_subject, config.seed);
  std::optional<std::filesystem::path> truth = config.truth;
  if (config.output) {
    auto csv = open_output(*config.output);
    write_panel_csv(csv, panel.data);
    finish(csv, *config.output);
    if (!truth) {
      truth = config.output->parent_path() / (config.output->stem().string() + ".truth.json");
    }
  } else {
    write_panel_csv(out, panel.data);
  }
  if (truth) {
    auto json = open_output(*truth);
    write_truth(json, panel, config);
    finish(json, *truth);
  }
}

PanelDataset load_fit_data(const FitConfig& config) {
  PanelDataset data;
  if (config.progabide_covariates) {
    auto in = open_input(config.input);
    const auto records = parse_progabide_csv(in);
    data = progabide_covariates(records, config.model == ModelChoice::kRandomInterceptSlope
                                             ? ProgabideModel::kRandomInterceptVisit
                                             : ProgabideModel::kRandomIntercept);
  } else {
    data = parse_panel_csv(config.input);
    if (config.model == ModelChoice::kRandomIntercept) {
      data.l = 1;
      for (auto& subject : data.subjects) subject.s = Eigen::MatrixXd::Ones(subject.size(), 1);
    } else if (config.model == ModelChoice::kRandomInterceptSlope && data.l != 2) {
      throw ConfigError("random_intercept_slope needs exactly two s-columns, the input has " +
                        std::to_string(data.l));
    }
  }
  const ValidationReport report = validate_dataset(data);
  if (!report.ok()) throw InputError(report.to_string());
  return data;
}

void cmd_fit(const FitConfig& config, std::ostream& log) {
  if (config.quantiles.empty()) throw ConfigError("no quantile levels given");
  for (double p : config.quantiles) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile " + format_double(p) + " is outside (0, 1)");
  }
  if (config.grid_size < 2) throw ConfigError("density grid needs at least 2 points");
  config.priors.validate();
  for (double p : config.quantiles) {
    QuantileSpec spec = config.spec;
    spec.p = p;
    spec.validate();
  }

  const PanelDataset data = load_fit_data(config);
  std::filesystem::create_directories(config.out_dir);

  std::vector<ModelComparison> comparisons;
  for (double p : config.quantiles) {
    QuantileSpec spec = config.spec;
    spec.p = p;
    const JitterFit fit = average_jitter_fit(data, spec, config.priors, config.options);
    comparisons.push_back(fit.comparison);

    const auto dir = config.out_dir / quantile_dir_name(p);
    std::filesystem::create_directories(dir);
    {
      const auto path = dir / "summary.json";
      auto out = open_output(path);
      write_summary_json(out, fit.summary);
      finish(out, path);
    }
    const ChainOutput& first = fit.replicates.front();
    for (const auto& selector : trace_selectors(first)) {
      const auto trace = export_trace(first, selector);
      const auto stem = file_stem(selector);
      {
        const auto path = dir / ("trace_" + stem + ".csv");
        auto out = open_output(path);
        write_trace_csv(out, trace);
        finish(out, path);
      }
      std::vector<double> values;
      values.reserve(trace.size());
      for (const auto& point : trace) values.push_back(point.value);
      const auto path = dir / ("density_" + stem + ".csv");
      auto out = open_output(path);
      write_density_csv(out, kde_density(values, config.grid_size));
      finish(out, path);
    }
    log << "p=" << format_double(p) << ": DIC " << format_double(fit.comparison.dic) << ", NLL "
        << format_double(fit.comparison.nll) << '\n';
  }

  const auto path = config.out_dir / "comparison.csv";
  auto out = open_output(path);
  write_comparison_csv(out, comparisons);
  finish(out, path);
}

void cmd_predict(const PredictConfig& config, std::ostream& out) {
  auto summary_in = open_input(config.summary);
  const PosteriorSummary summary = read_summary_json(summary_in);
  auto covariate_in = open_input(config.input);
  const CovariateTable table = parse_covariate_csv(covariate_in);

  const auto k = static_cast<Index>(summary.coefficients.size());
  const Index l = summary.alpha_mean.cols();
  if (!table.rows.empty()) {
    if (table.k != k) {
      throw InputError("covariates have k = " + std::to_string(table.k) + " but the fit has k = " +
                       std::to_string(k));
    }
    if (table.l != l) {
      throw InputError("covariates have l = " + std::to_string(table.l) + " but the fit has l = " +
                       std::to_string(l));
    }
  }

  Eigen::VectorXd beta(k);
  for (Index h = 0; h < k; ++h) beta[h] = summary.coefficients[h].avg_post_mean;
  std::map<std::string, Index> seen;
  for (std::size_t i = 0; i < summary.subject_ids.size(); ++i) {
    seen.emplace(summary.subject_ids[i], static_cast<Index>(i));
  }

  std::ostringstream buffer;
  buffer << "row,prediction\n";
  std::int64_t row = 0;
  for (const auto& r : table.rows) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(l);
    if (const auto it = seen.find(r.subject_id); it != seen.end()) {
      alpha = summary.alpha_mean.row(it->second).transpose();
    }
    buffer << ++row << ',' << predict_count_quantile(beta, alpha, r.x, r.s, summary.quantile) << '\n';
  }

  if (config.output) {
    auto file = open_output(*config.output);
    file << buffer.str();
    finish(file, *config.output);
  } else {
    out << buffer.str();
  }
}

void cmd_diagnose(const DiagnoseConfig& config, std::ostream& out) {
  auto in = open_input(config.trace);
  const NumericTable table = read_numeric_csv(in);
  std::size_t column = table.header.size();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == "value") column = c;
  }
  if (column == table.header.size()) throw InputError("trace file has no 'value' column");
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (const auto& row : table.rows) values.push_back(row[column]);

  const Interval ci = credible_interval(values, config.level);
  Json doc;
  doc["draws"] = values.size();
  doc["mean"] = mean(values);
  doc["sd"] = std::sqrt(sample_variance(values));
  doc["ci_low"] = ci.low;
  doc["ci_high"] = ci.high;
  doc["lag1_autocorrelation"] = lag1_autocorrelation(values);
  doc["bandwidth"] = silverman_bandwidth(values);

  if (config.output) {
    if (config.grid_size < 2) throw ConfigError("density grid needs at least 2 points");
    auto file = open_output(*config.output);
    write_density_csv(file, kde_density(values, config.grid_size));
    finish(file, *config.output);
  }
  out << doc.dump(2) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian quantile regression for panel count data"};
  app.require_subcommand(1);

  SimulateConfig sim;
  std::string design = "study1";
  std::string sim_output;
  std::string sim_truth;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic panel");
  simulate->add_option("--design", design, "study1 or study2")
      ->check(CLI::IsMember({"study1", "study2"}));
  simulate->add_option("--subjects", sim.subjects, "number of subjects")->check(CLI::PositiveNumber);
  simulate->add_option("--per", sim.per_subject, "visits per subject")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("-o,--output", sim_output, "CSV path (stdout if omitted)");
  simulate->add_option("--truth", sim_truth, "truth JSON path");

  FitConfig fit;
  std::string model = "auto";
  std::optional<int> fit_threads;
  std::string sigma_mode;
  bool paper_literal_sigma = false;
  auto* fit_cmd = app.add_subcommand("fit", "fit one or more quantile levels");
  fit_cmd->add_option("--input", fit.input, "panel CSV")->required();
  fit_cmd->add_option("-o,--out-dir", fit.out_dir, "output directory");
  fit_cmd->add_option("--quantiles", fit.quantiles, "comma-separated quantile levels")
      ->delimiter(',');
  fit_cmd->add_option("--m-jitter", fit.spec.m_jitter, "jittered replicates");
  fit_cmd->add_option("--iterations", fit.spec.iterations, "Gibbs sweeps per replicate");
  fit_cmd->add_option("--burn-in", fit.spec.burn_in, "discarded sweeps");
  fit_cmd->add_option("--thin", fit.options.thin, "keep every n-th draw after burn-in");
  fit_cmd->add_option("--seed", fit.spec.master_seed, "master seed");
  fit_cmd->add_option("--zeta", fit.spec.zeta, "floor of the latent transform");
  fit_cmd->add_option("--level", fit.options.level, "credible level");
  fit_cmd->add_option("--a1", fit.priors.a1, "lambda^2 gamma shape");
  fit_cmd->add_option("--a2", fit.priors.a2, "lambda^2 gamma rate");
  fit_cmd->add_option("--b1", fit.priors.b1, "phi^2 inverse-gamma shape");
  fit_cmd->add_option("--b2", fit.priors.b2, "phi^2 inverse-gamma scale");
  fit_cmd->add_option("--c1", fit.priors.c1, "sigma inverse-gamma shape");
  fit_cmd->add_option("--c2", fit.priors.c2, "sigma inverse-gamma scale");
  fit_cmd->add_option("--model", model, "auto, random_intercept or random_intercept_slope")
      ->check(CLI::IsMember({"auto", "random_intercept", "random_intercept_slope"}));
  fit_cmd->add_flag("--progabide-covariates", fit.progabide_covariates,
                    "input holds raw subject,y,baseline,age,trt,visit records");
  fit_cmd->add_flag("--paper-literal-sigma", paper_literal_sigma,
                    "sigma update from the likelihood terms only");
  fit_cmd->add_option("--threads", fit_threads, "concurrent replicate chains");
  fit_cmd->add_option("--grid", fit.grid_size, "density grid points");

  PredictConfig predict;
  std::string predict_output;
  auto* predict_cmd = app.add_subcommand("predict", "integer quantile predictions");
  predict_cmd->add_option("--summary", predict.summary, "summary.json from fit")->required();
  predict_cmd->add_option("--input", predict.input, "covariate CSV")->required();
  predict_cmd->add_option("-o,--output", predict_output, "CSV path (stdout if omitted)");

  DiagnoseConfig diagnose;
  std::string diagnose_output;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "summarize a trace file");
  diagnose_cmd->add_option("--trace", diagnose.trace, "trace CSV from fit")->required();
  diagnose_cmd->add_option("-o,--output", diagnose_output, "density CSV path");
  diagnose_cmd->add_option("--grid", diagnose.grid_size, "density grid points");
  diagnose_cmd->add_option("--level", diagnose.level, "credible level");

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (simulate->parsed()) {
      sim.design = design == "study2" ? Design::kStudy2 : Design::kStudy1;
      if (!sim_output.empty()) sim.output = sim_output;
      if (!sim_truth.empty()) sim.truth = sim_truth;
      cmd_simulate(sim, out);
    } else if (fit_cmd->parsed()) {
      fit.model = model == "random_intercept"         ? ModelChoice::kRandomIntercept
                  : model == "random_intercept_slope" ? ModelChoice::kRandomInterceptSlope
                                                      : ModelChoice::kAuto;
      fit.options.sigma_conditional =
          paper_literal_sigma ? SigmaConditional::kLikelihoodOnly : SigmaConditional::kJointConsistent;
      fit.options.threads = fit_threads ? *fit_threads : threads_from_env();
      if (fit.options.threads < 1) throw ConfigError("--threads must be at least 1");
      cmd_fit(fit, err);
    } else if (predict_cmd->parsed()) {
      if (!predict_output.empty()) predict.output = predict_output;
      cmd_predict(predict, out);
    } else if (diagnose_cmd->parsed()) {
      if (!diagnose_output.empty()) diagnose.output = diagnose_output;
      cmd_diagnose(diagnose, out);
    }
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace alq::cli
