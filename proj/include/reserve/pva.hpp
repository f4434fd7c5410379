#pragma once

// Stochastic metapopulation simulator used as the population viability oracle.
//
// Each patch carries a local population with Ricker growth, Poisson
// demographic noise and mean-one lognormal environmental noise. After growth a
// binomial fraction of each patch emigrates; emigrants settle in other patches
// with probability proportional to exp(-distance / kernel_scale). Emigrants
// with no destination die. Quasi-extinction (total abundance at or below the
// extinction threshold) is absorbing.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reserve/landscape.hpp"
#include "reserve/random.hpp"

namespace reserve {

struct PvaConfig {
  int horizon = 100;               // years
  int replicates = 1000;
  double growth_rate = 0.6;        // r_max, per year
  double env_sigma = 0.3;          // lognormal environmental noise scale
  double kappa = 2.0;              // individuals per unit THS
  double init_fraction = 1.0;      // N(0) = round(init_fraction * K)
  double dispersal_rate = 0.1;     // annual emigration fraction
  double kernel_scale = 3.0;       // cells
  long long extinction_threshold = 0;
  double ci_alpha = 0.05;

  // Throws InvalidArgumentError naming the first offending field.
  void validate() const;

  friend bool operator==(const PvaConfig&, const PvaConfig&) = default;
};

// Flat key=value text, one per line; '#' comments and blank lines allowed.
// Unknown keys and malformed values raise ConfigError with the line number.
PvaConfig parse_pva_config(std::istream& in, const std::string& source = "pva config");
PvaConfig load_pva_config(const std::string& path);
std::string to_text(const PvaConfig& cfg);

struct PvaMetrics {
  double risk = 1.0;
  double time_median = 0.0;  // horizon+1 encodes "no median extinction"
  double ema = 0.0;          // expected minimum abundance
  double ema_sem = 0.0;      // standard error of the min-abundance sample
  double ci_halfwidth = 0.0;
  int replicates_extinct = 0;

  friend bool operator==(const PvaMetrics&, const PvaMetrics&) = default;
};

struct ReplicateOutcome {
  int extinct_year = 0;  // first year at/below threshold, or horizon+1
  long long min_total_abundance = 0;
  long long terminal_abundance = 0;
};

// Per-patch parameters derived from a PatchSet; shared read-only by replicates.
struct MetapopulationModel {
  std::vector<long long> carrying_capacity;  // K_i = max(1, round(kappa * THS_i))
  std::vector<long long> initial_abundance;
  // For each source patch, cumulative settlement probabilities over all
  // patches (own entry has zero mass). Empty when the source has no
  // destination.
  std::vector<std::vector<double>> settlement_cdf;

  std::size_t patches() const { return carrying_capacity.size(); }
};

MetapopulationModel build_model(const PatchSet& patches, const PvaConfig& cfg);

// One year of growth followed by dispersal. Abundances must be non-negative.
std::vector<long long> step_year(std::span<const long long> state, const MetapopulationModel& model,
                                 const PvaConfig& cfg, Engine& rng);

// Called with (year, abundances) for year 0 and every simulated year.
using TraceFn = std::function<void(int, std::span<const long long>)>;

ReplicateOutcome run_replicate(const MetapopulationModel& model, const PvaConfig& cfg, std::uint64_t seed,
                               const TraceFn& trace = {});

// Seed of replicate `index` within the batch identified by eval_seed.
inline std::uint64_t replicate_seed(std::uint64_t eval_seed, int index) {
  return derive_seed(eval_seed, static_cast<std::uint64_t>(index));
}

// Runs cfg.replicates trajectories split across `workers` threads. Outcome r
// depends only on (eval_seed, r), so the batch is independent of workers.
std::vector<ReplicateOutcome> simulate_outcomes(const PatchSet& patches, const PvaConfig& cfg,
                                                std::uint64_t eval_seed, int workers = 1);

PvaMetrics summarize(std::span<const ReplicateOutcome> outcomes, const PvaConfig& cfg);

// Empty PatchSet short-circuits to risk 1, time 0, ema 0.
PvaMetrics simulate(const PatchSet& patches, const PvaConfig& cfg, std::uint64_t eval_seed, int workers = 1);

// Writes CSV rows replicate,year,patch_id,abundance for the first
// `max_replicates` replicates.
void write_trace_csv(const PatchSet& patches, const PvaConfig& cfg, std::uint64_t eval_seed, int max_replicates,
                     std::ostream& out);

double risk_of_extinction(std::span<const ReplicateOutcome> outcomes, long long threshold);
// Lower median of extinction years, non-extinct replicates counting as horizon+1.
double median_time_to_extinction(std::span<const ReplicateOutcome> outcomes, int horizon);
double expected_minimum_abundance(std::span<const ReplicateOutcome> outcomes);

// Asymptotic Kolmogorov-Smirnov half-width c(alpha)/sqrt(replicates).
double ks_ci_halfwidth(int replicates, double alpha);
double ks_critical_coefficient(double alpha);

// ">horizon" for the sentinel, the integer year otherwise.
std::string format_time(double time_median, int horizon);

}  // namespace reserve
