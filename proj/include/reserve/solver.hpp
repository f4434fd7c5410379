#pragma once

// Extended ant colony optimization over binary selection vectors.
//
// The solver keeps an archive of the k best distinct selections under the
// lexicographic (total violation, objective, bits) order. Each new ant builds
// its selection one bit at a time: pick an archive member by rank weight,
// sample a Gaussian centred on that member's bit with spread proportional to
// the archive's mean absolute distance from it, clamp to [0,1] and round.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reserve/landscape.hpp"
#include "reserve/pva.hpp"

namespace reserve {

struct Evaluation {
  double objective = 0.0;
  std::vector<double> violations;  // one per constraint, each >= 0
  double total_violation = 0.0;
  std::optional<PvaMetrics> metrics;
  double cost = 0.0;

  bool feasible() const { return total_violation == 0.0; }

  // Builds an Evaluation whose total_violation is the sum of `violations`.
  static Evaluation make(double objective, std::vector<double> violations, double cost = 0.0,
                         std::optional<PvaMetrics> metrics = std::nullopt);

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct Candidate {
  Selection selection;
  Evaluation eval;
};

// Strict weak order: lower total violation, then lower objective, then
// lexicographically smaller bit string. Throws InvalidArgumentError when the
// violation vectors differ in length.
bool lexicographic_less(const Candidate& a, const Candidate& b);

using Oracle = std::function<Evaluation(const Selection&)>;

// Cache in front of an oracle keyed by the exact bit vector.
class MemoizedOracle {
 public:
  explicit MemoizedOracle(Oracle inner) : inner_(std::move(inner)) {}

  // Failures of the wrapped oracle are rethrown as OracleError.
  const Evaluation& operator()(const Selection& selection);

  long long oracle_calls() const { return calls_; }
  long long cache_hits() const { return hits_; }
  std::size_t distinct() const { return cache_.size(); }

 private:
  Oracle inner_;
  std::map<std::vector<std::uint8_t>, Evaluation> cache_;
  long long calls_ = 0;
  long long hits_ = 0;
};

struct AcoConfig {
  std::optional<int> ants_per_generation;  // default dim + 1
  int generations = 0;
  std::optional<int> archive_size;         // default min(ants, 63)
  double q_influence = 1.0;
  double xi_spread = 1.0;
  // Lower bound on the kernel spread; default default_sigma_floor(dim).
  std::optional<double> sigma_floor;
  std::uint64_t seed = 0;
  std::uint64_t eval_seed = 0;  // forwarded to the oracle by the caller
};

struct GenerationRecord {
  int generation = 0;
  double best_objective = 0.0;
  double best_total_violation = 0.0;
  long long oracle_calls = 0;
  long long cache_hits = 0;
  double elapsed_seconds = 0.0;
};

struct SolveResult {
  Selection best_selection;
  Evaluation best_eval;
  long long evaluations_used = 0;  // samples drawn, cache hits included
  long long oracle_calls = 0;
  long long cache_hits = 0;
  std::vector<GenerationRecord> history;
  std::vector<Candidate> archive;  // final archive, best first
};

using ProgressFn = std::function<void(const GenerationRecord&)>;

// Generation 0 draws every bit Bernoulli(0.5); later generations sample from
// the archive kernel. Draws ants * (generations + 1) samples in total.
SolveResult solve(const Oracle& oracle, int dim, const AcoConfig& cfg, const ProgressFn& progress = {});

// max(0.1, 0.5 / z) capped at 0.5, where z is the standard normal quantile
// at 1 - 1/dim: a converged archive still flips about one bit per ant.
double default_sigma_floor(int dim);

// Tab-separated: generation, best_objective, best_total_violation,
// oracle_calls, cache_hits, elapsed_seconds.
std::string format_progress(const GenerationRecord& record);

// Archive kernel pieces, exposed for tests.
namespace aco_detail {
std::vector<double> rank_weights(int archive_size, double q_influence);
Selection sample_from_archive(const std::vector<Candidate>& archive, const std::vector<double>& cumulative_weights,
                              double xi_spread, double sigma_floor, Engine& rng);
}  // namespace aco_detail

}  // namespace reserve
