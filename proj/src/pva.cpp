#include "reserve/pva.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "reserve/errors.hpp"
#include "reserve/sampling.hpp"

namespace reserve {
namespace {

void require_nonempty(std::span<const ReplicateOutcome> outcomes, const char* what) {
  if (outcomes.empty()) throw InvalidArgumentError(std::string(what) + ": no replicate outcomes");
}

// Poisson draw that tolerates a zero mean and caps runaway means.
long long draw_poisson(double mean, Engine& rng) {
  if (!(mean > 0.0)) return 0;
  return sample_poisson(std::min(mean, 1e12), rng);
}

}  // namespace

void PvaConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgumentError("invalid PVA config: " + what); };
  if (horizon < 1) fail("horizon must be >= 1");
  if (replicates < 1) fail("replicates must be >= 1");
  if (!std::isfinite(growth_rate)) fail("growth_rate must be finite");
  if (!(env_sigma >= 0.0) || !std::isfinite(env_sigma)) fail("env_sigma must be >= 0");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) fail("kappa must be > 0");
  if (!(init_fraction > 0.0 && init_fraction <= 1.0)) fail("init_fraction must lie in (0,1]");
  if (!(dispersal_rate >= 0.0 && dispersal_rate < 1.0)) fail("dispersal_rate must lie in [0,1)");
  if (!(kernel_scale > 0.0) || !std::isfinite(kernel_scale)) fail("kernel_scale must be > 0");
  if (extinction_threshold < 0) fail("extinction_threshold must be >= 0");
  if (!(ci_alpha > 0.0 && ci_alpha < 1.0)) fail("ci_alpha must lie in (0,1)");
}

MetapopulationModel build_model(const PatchSet& patches, const PvaConfig& cfg) {
  MetapopulationModel model;
  const std::size_t count = patches.size();
  model.carrying_capacity.reserve(count);
  model.initial_abundance.reserve(count);
  for (const auto& patch : patches.patches) {
    const auto k = std::max<long long>(1, std::llround(cfg.kappa * patch.ths));
    model.carrying_capacity.push_back(k);
    model.initial_abundance.push_back(std::llround(cfg.init_fraction * static_cast<double>(k)));
  }

  model.settlement_cdf.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> weights(count, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const double dr = patches.patches[i].centroid_row - patches.patches[j].centroid_row;
      const double dc = patches.patches[i].centroid_col - patches.patches[j].centroid_col;
      weights[j] = std::exp(-std::hypot(dr, dc) / cfg.kernel_scale);
      total += weights[j];
    }
    if (!(total > 0.0)) continue;
    double running = 0.0;
    for (auto& w : weights) {
      running += w / total;
      w = running;
    }
    const std::size_t last = (i + 1 == count) ? count - 2 : count - 1;
    for (std::size_t j = last; j < count; ++j) weights[j] = 1.0;
    model.settlement_cdf[i] = std::move(weights);
  }
  return model;
}

namespace {

// Scratch buffers reused across the years of one replicate.
struct StepBuffers {
  std::vector<long long> arrivals;
};

void step_in_place(std::vector<long long>& state, const MetapopulationModel& model, const PvaConfig& cfg,
                   Engine& rng, std::normal_distribution<double>& normal, StepBuffers& buffers) {
  const std::size_t count = model.patches();
  const double noise_shift = 0.5 * cfg.env_sigma * cfg.env_sigma;

  for (std::size_t i = 0; i < count; ++i) {
    // One environmental draw per patch per year keeps the stream aligned
    // across candidates.
    const double eps = cfg.env_sigma > 0.0 ? std::exp(cfg.env_sigma * normal(rng) - noise_shift) : 1.0;
    if (state[i] == 0) continue;
    const double n = static_cast<double>(state[i]);
    const double k = static_cast<double>(model.carrying_capacity[i]);
    state[i] = draw_poisson(n * std::exp(cfg.growth_rate * (1.0 - n / k)) * eps, rng);
  }

  if (cfg.dispersal_rate <= 0.0) return;

  auto& arrivals = buffers.arrivals;
  arrivals.assign(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    const long long emigrants = sample_binomial(state[i], cfg.dispersal_rate, rng);
    if (emigrants == 0) continue;
    state[i] -= emigrants;
    const auto& cdf = model.settlement_cdf[i];
    if (cdf.empty()) continue;  // nowhere to go: dispersal mortality
    for (long long e = 0; e < emigrants; ++e) {
      const double u = uniform01(rng);
      const auto dest = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      ++arrivals[std::min(dest, count - 1)];
    }
  }
  for (std::size_t i = 0; i < count; ++i) state[i] += arrivals[i];
}

}  // namespace

std::vector<long long> step_year(std::span<const long long> state, const MetapopulationModel& model,
                                 const PvaConfig& cfg, Engine& rng) {
  if (state.size() != model.patches()) throw DimensionError("state size does not match patch count");
  for (long long n : state) {
    if (n < 0) throw InvalidArgumentError("abundances must be non-negative");
  }
  std::vector<long long> next(state.begin(), state.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  StepBuffers buffers;
  step_in_place(next, model, cfg, rng, normal, buffers);
  return next;
}

ReplicateOutcome run_replicate(const MetapopulationModel& model, const PvaConfig& cfg, std::uint64_t seed,
                               const TraceFn& trace) {
  Engine rng(seed);
  std::vector<long long> state = model.initial_abundance;
  auto total_of = [](const std::vector<long long>& v) { return std::accumulate(v.begin(), v.end(), 0LL); };

  ReplicateOutcome out;
  out.extinct_year = cfg.horizon + 1;
  long long total = total_of(state);
  if (trace) trace(0, state);
  if (total <= cfg.extinction_threshold) {
    out.extinct_year = 0;
    return out;
  }
  out.min_total_abundance = total;

  std::normal_distribution<double> normal(0.0, 1.0);
  StepBuffers buffers;
  for (int year = 1; year <= cfg.horizon; ++year) {
    step_in_place(state, model, cfg, rng, normal, buffers);
    total = total_of(state);
    if (total <= cfg.extinction_threshold) {
      std::fill(state.begin(), state.end(), 0);
      if (trace) trace(year, state);
      out.extinct_year = year;
      out.min_total_abundance = 0;
      out.terminal_abundance = 0;
      return out;
    }
    if (trace) trace(year, state);
    out.min_total_abundance = std::min(out.min_total_abundance, total);
  }
  out.terminal_abundance = total;
  return out;
}

std::vector<ReplicateOutcome> simulate_outcomes(const PatchSet& patches, const PvaConfig& cfg,
                                                std::uint64_t eval_seed, int workers) {
  cfg.validate();
  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(cfg.replicates));
  const MetapopulationModel model = build_model(patches, cfg);

  auto run_range = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      outcomes[static_cast<std::size_t>(r)] = run_replicate(model, cfg, replicate_seed(eval_seed, r));
    }
  };

  const int threads = std::clamp(workers, 1, cfg.replicates);
  if (threads == 1) {
    run_range(0, cfg.replicates);
    return outcomes;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (cfg.replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(cfg.replicates, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
  }
  return outcomes;
}

PvaMetrics summarize(std::span<const ReplicateOutcome> outcomes, const PvaConfig& cfg) {
  require_nonempty(outcomes, "summarize");
  PvaMetrics m;
  m.risk = risk_of_extinction(outcomes, cfg.extinction_threshold);
  m.time_median = median_time_to_extinction(outcomes, cfg.horizon);
  m.ema = expected_minimum_abundance(outcomes);
  m.replicates_extinct = static_cast<int>(
      std::count_if(outcomes.begin(), outcomes.end(), [&](const auto& o) { return o.extinct_year <= cfg.horizon; }));
  const auto count = static_cast<double>(outcomes.size());
  if (outcomes.size() > 1) {
    double ss = 0.0;
    for (const auto& o : outcomes) {
      const double d = static_cast<double>(o.min_total_abundance) - m.ema;
      ss += d * d;
    }
    m.ema_sem = std::sqrt(ss / (count - 1.0) / count);
  }
  m.ci_halfwidth = std::min(1.0, ks_ci_halfwidth(static_cast<int>(outcomes.size()), cfg.ci_alpha));
  return m;
}

PvaMetrics simulate(const PatchSet& patches, const PvaConfig& cfg, std::uint64_t eval_seed, int workers) {
  cfg.validate();
  if (patches.empty()) {
    PvaMetrics m;
    m.risk = 1.0;
    m.time_median = 0.0;
    m.ema = 0.0;
    m.replicates_extinct = cfg.replicates;
    m.ci_halfwidth = std::min(1.0, ks_ci_halfwidth(cfg.replicates, cfg.ci_alpha));
    return m;
  }
  const auto outcomes = simulate_outcomes(patches, cfg, eval_seed, workers);
  return summarize(outcomes, cfg);
}

void write_trace_csv(const PatchSet& patches, const PvaConfig& cfg, std::uint64_t eval_seed, int max_replicates,
                     std::ostream& out) {
  cfg.validate();
  const MetapopulationModel model = build_model(patches, cfg);
  out << "replicate,year,patch_id,abundance\n";
  const int count = std::min(max_replicates, cfg.replicates);
  for (int r = 0; r < count; ++r) {
    run_replicate(model, cfg, replicate_seed(eval_seed, r), [&](int year, std::span<const long long> state) {
      for (std::size_t i = 0; i < state.size(); ++i) {
        out << r << ',' << year << ',' << patches.patches[i].id << ',' << state[i] << '\n';
      }
    });
  }
}

double risk_of_extinction(std::span<const ReplicateOutcome> outcomes, long long threshold) {
  require_nonempty(outcomes, "risk_of_extinction");
  const auto extinct = std::count_if(outcomes.begin(), outcomes.end(),
                                     [&](const auto& o) { return o.terminal_abundance <= threshold; });
  return static_cast<double>(extinct) / static_cast<double>(outcomes.size());
}

double median_time_to_extinction(std::span<const ReplicateOutcome> outcomes, int horizon) {
  require_nonempty(outcomes, "median_time_to_extinction");
  std::vector<int> years;
  years.reserve(outcomes.size());
  for (const auto& o : outcomes) years.push_back(std::min(o.extinct_year, horizon + 1));
  const auto lower = years.begin() + static_cast<std::ptrdiff_t>((years.size() - 1) / 2);
  std::nth_element(years.begin(), lower, years.end());
  return static_cast<double>(*lower);
}

double expected_minimum_abundance(std::span<const ReplicateOutcome> outcomes) {
  require_nonempty(outcomes, "expected_minimum_abundance");
  double sum = 0.0;
  for (const auto& o : outcomes) sum += static_cast<double>(o.min_total_abundance);
  return sum / static_cast<double>(outcomes.size());
}

double ks_critical_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgumentError("alpha must lie in (0,1)");
  // Tabulated asymptotic values; the closed form sqrt(-ln(alpha/2)/2) elsewhere.
  struct Entry {
    double alpha;
    double c;
  };
  static constexpr Entry kTable[] = {{0.20, 1.073}, {0.10, 1.224}, {0.05, 1.358}, {0.02, 1.517}, {0.01, 1.628},
                                     {0.005, 1.731}, {0.001, 1.949}};
  for (const auto& e : kTable) {
    if (std::abs(alpha - e.alpha) < 1e-12) return e.c;
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double ks_ci_halfwidth(int replicates, double alpha) {
  if (replicates < 1) throw InvalidArgumentError("replicates must be >= 1");
  return ks_critical_coefficient(alpha) / std::sqrt(static_cast<double>(replicates));
}

std::string format_time(double time_median, int horizon) {
  if (time_median > static_cast<double>(horizon)) return ">" + std::to_string(horizon);
  return std::to_string(std::llround(time_median));
}

}  // namespace reserve
