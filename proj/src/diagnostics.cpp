#include "alq/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>

#include "alq/errors.hpp"
#include "alq/jitter.hpp"
#include "alq/rng.hpp"
#include "alq/stats.hpp"

namespace alq {

namespace {

// Parses "name[a]" or "name[a][b]" into 1-based indices.
bool parse_indexed(std::string_view selector, std::string_view name, std::vector<Index>& indices) {
  if (selector.substr(0, name.size()) != name) return false;
  std::string_view rest = selector.substr(name.size());
  indices.clear();
  while (!rest.empty()) {
    if (rest.front() != '[') return false;
    const auto close = rest.find(']');
    if (close == std::string_view::npos || close == 1) return false;
    Index value = 0;
    const auto digits = rest.substr(1, close - 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
    indices.push_back(value);
    rest = rest.substr(close + 1);
  }
  return !indices.empty();
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

PosteriorPoint posterior_point(const ChainOutput& chain) {
  if (chain.draws.empty()) throw ParameterError("chain has no recorded draws");
  PosteriorPoint point{Eigen::VectorXd::Zero(chain.draws.front().beta.size()),
                       Eigen::MatrixXd::Zero(chain.draws.front().alpha.rows(),
                                             chain.draws.front().alpha.cols()),
                       0.0};
  for (const auto& draw : chain.draws) {
    point.beta += draw.beta;
    point.alpha += draw.alpha;
    point.sigma += draw.sigma;
  }
  const double count = static_cast<double>(chain.draws.size());
  point.beta /= count;
  point.alpha /= count;
  point.sigma /= count;
  return point;
}

Eigen::VectorXd refreshed_latent(const PanelDataset& data, const QuantileSpec& spec,
                                 int jitter_index) {
  RngStream rng(spec.master_seed,
                replicate_stream_id(static_cast<std::uint64_t>(jitter_index), StreamPhase::kRefresh));
  return jitter_latent(data, spec.p, spec.zeta, jitter_index, rng).z;
}

ModelComparison dic_from_deviances(std::span<const double> deviances, double deviance_at_mean) {
  ModelComparison out;
  out.mean_deviance = mean(deviances);
  out.deviance_at_mean = deviance_at_mean;
  out.p_d = out.mean_deviance - deviance_at_mean;
  out.dic = deviance_at_mean + 2.0 * out.p_d;
  out.nll = 0.5 * deviance_at_mean;
  return out;
}

ModelComparison compute_dic(const ChainOutput& chain, const PanelDataset& data,
                            const QuantileSpec& spec) {
  if (chain.deviance.empty()) throw ParameterError("chain has no recorded deviances");
  const PosteriorPoint point = posterior_point(chain);
  const Eigen::VectorXd z = refreshed_latent(data, spec, chain.jitter_index);
  const double at_mean = al_deviance(data, z, point.beta, point.alpha, point.sigma, spec.p);
  ModelComparison out = dic_from_deviances(chain.deviance, at_mean);
  out.quantile = spec.p;
  return out;
}

double compute_nll(std::span<const ChainOutput> chains, const PanelDataset& data,
                   const QuantileSpec& spec) {
  if (chains.empty()) throw ParameterError("no chains to score");
  double total = 0.0;
  for (const auto& chain : chains) {
    const PosteriorPoint point = posterior_point(chain);
    const Eigen::VectorXd z = refreshed_latent(data, spec, chain.jitter_index);
    total += 0.5 * al_deviance(data, z, point.beta, point.alpha, point.sigma, spec.p);
  }
  return total / static_cast<double>(chains.size());
}

ModelComparison compare_models(std::span<const ChainOutput> chains, const PanelDataset& data,
                               const QuantileSpec& spec) {
  if (chains.empty()) throw ParameterError("no chains to compare");
  std::vector<const ChainOutput*> ordered;
  for (const auto& chain : chains) ordered.push_back(&chain);
  std::sort(ordered.begin(), ordered.end(), [](const ChainOutput* a, const ChainOutput* b) {
    return a->jitter_index < b->jitter_index;
  });

  ModelComparison avg;
  avg.quantile = spec.p;
  for (const auto* chain : ordered) {
    const ModelComparison one = compute_dic(*chain, data, spec);
    avg.nll += one.nll;
    avg.mean_deviance += one.mean_deviance;
    avg.deviance_at_mean += one.deviance_at_mean;
  }
  const double m = static_cast<double>(ordered.size());
  avg.nll /= m;
  avg.mean_deviance /= m;
  avg.deviance_at_mean /= m;
  avg.p_d = avg.mean_deviance - avg.deviance_at_mean;
  avg.dic = avg.deviance_at_mean + 2.0 * avg.p_d;
  return avg;
}

std::vector<TracePoint> export_trace(const ChainOutput& chain, std::string_view selector) {
  if (chain.draws.empty()) throw ParameterError("chain has no recorded draws");
  const auto& first = chain.draws.front();
  std::function<double(Index)> value_of;
  std::vector<Index> idx;

  if (selector == "sigma") {
    value_of = [&](Index t) { return chain.draws[t].sigma; };
  } else if (selector == "phi2") {
    value_of = [&](Index t) { return chain.draws[t].phi2; };
  } else if (selector == "lambda2") {
    value_of = [&](Index t) { return chain.draws[t].lambda2; };
  } else if (selector == "deviance") {
    value_of = [&](Index t) { return chain.deviance[t]; };
  } else if (parse_indexed(selector, "beta", idx) && idx.size() == 1 && idx[0] >= 1 &&
             idx[0] <= first.beta.size()) {
    const Index h = idx[0] - 1;
    value_of = [&chain, h](Index t) { return chain.draws[t].beta[h]; };
  } else if (parse_indexed(selector, "g2", idx) && idx.size() == 1 && idx[0] >= 1 &&
             idx[0] <= first.g2.size()) {
    const Index h = idx[0] - 1;
    value_of = [&chain, h](Index t) { return chain.draws[t].g2[h]; };
  } else if (parse_indexed(selector, "alpha", idx) && idx.size() == 2 && idx[0] >= 1 &&
             idx[0] <= first.alpha.rows() && idx[1] >= 1 && idx[1] <= first.alpha.cols()) {
    const Index i = idx[0] - 1;
    const Index j = idx[1] - 1;
    value_of = [&chain, i, j](Index t) { return chain.draws[t].alpha(i, j); };
  } else {
    throw LookupError("unknown trace selector '" + std::string(selector) + "'");
  }

  std::vector<TracePoint> rows;
  rows.reserve(chain.draws.size());
  for (Index t = 0; t < chain.size(); ++t) rows.push_back({chain.iterations[t], value_of(t)});
  return rows;
}

std::vector<std::string> trace_selectors(const ChainOutput& chain) {
  std::vector<std::string> names;
  if (chain.draws.empty()) return names;
  for (Index h = 1; h <= chain.draws.front().beta.size(); ++h) {
    names.push_back("beta[" + std::to_string(h) + "]");
  }
  names.insert(names.end(), {"sigma", "phi2", "lambda2"});
  return names;
}

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw ParameterError("bandwidth needs at least two values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(sample_variance(sorted));
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  if (!(spread > 0.0)) throw ParameterError("density estimate needs at least two distinct values");
  return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

std::vector<DensityPoint> kde_density(std::span<const double> values, int grid_size) {
  if (grid_size < 2) throw ParameterError("density grid needs at least two points");
  const double bandwidth = silverman_bandwidth(values);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  const double lo = sorted.front() - 3.0 * bandwidth;
  const double hi = sorted.back() + 3.0 * bandwidth;
  const double step = (hi - lo) / (grid_size - 1);
  // Kernel mass beyond 9 bandwidths is below 1e-17 of the peak.
  const double cutoff = 9.0 * bandwidth;
  const double norm =
      1.0 / (static_cast<double>(sorted.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));

  std::vector<DensityPoint> grid(static_cast<std::size_t>(grid_size));
  for (int g = 0; g < grid_size; ++g) {
    const double x = lo + step * g;
    const auto begin = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
    const auto end = std::upper_bound(begin, sorted.end(), x + cutoff);
    double acc = 0.0;
    for (auto it = begin; it != end; ++it) {
      const double u = (x - *it) / bandwidth;
      acc += std::exp(-0.5 * u * u);
    }
    grid[g] = {x, acc * norm};
  }
  return grid;
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> rows) {
  out << "iter,value\n";
  for (const auto& row : rows) out << row.iteration << ',' << format_double(row.value) << '\n';
}

void write_density_csv(std::ostream& out, std::span<const DensityPoint> rows) {
  out << "x,density\n";
  for (const auto& row : rows) {
    out << format_double(row.x) << ',' << format_double(row.density) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, std::span<const ModelComparison> rows) {
  out << "quantile,nll,dic,p_d\n";
  for (const auto& row : rows) {
    out << format_double(row.quantile) << ',' << format_double(row.nll) << ','
        << format_double(row.dic) << ',' << format_double(row.p_d) << '\n';
  }
}

}  // namespace alq
