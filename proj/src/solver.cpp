#include "reserve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "reserve/errors.hpp"

namespace reserve {

Evaluation Evaluation::make(double objective, std::vector<double> violations, double cost,
                            std::optional<PvaMetrics> metrics) {
  Evaluation e;
  e.objective = objective;
  e.total_violation = std::accumulate(violations.begin(), violations.end(), 0.0);
  e.violations = std::move(violations);
  e.cost = cost;
  e.metrics = metrics;
  return e;
}

bool lexicographic_less(const Candidate& a, const Candidate& b) {
  if (a.eval.violations.size() != b.eval.violations.size()) {
    throw InvalidArgumentError("cannot compare evaluations with " + std::to_string(a.eval.violations.size()) +
                               " and " + std::to_string(b.eval.violations.size()) + " constraints");
  }
  if (a.eval.total_violation != b.eval.total_violation) return a.eval.total_violation < b.eval.total_violation;
  if (a.eval.objective != b.eval.objective) return a.eval.objective < b.eval.objective;
  return a.selection.bits < b.selection.bits;
}

const Evaluation& MemoizedOracle::operator()(const Selection& selection) {
  if (auto it = cache_.find(selection.bits); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  Evaluation eval;
  try {
    eval = inner_(selection);
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    throw OracleError(selection.to_string(), e.what());
  }
  ++calls_;
  return cache_.emplace(selection.bits, std::move(eval)).first->second;
}

namespace aco_detail {

std::vector<double> rank_weights(int archive_size, double q_influence) {
  std::vector<double> w(static_cast<std::size_t>(archive_size));
  const double k = static_cast<double>(archive_size);
  const double denom = 2.0 * q_influence * q_influence * k * k;
  for (int l = 0; l < archive_size; ++l) {
    const double rank_offset = static_cast<double>(l);  // rank - 1
    w[static_cast<std::size_t>(l)] = std::exp(-rank_offset * rank_offset / denom);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

Selection sample_from_archive(const std::vector<Candidate>& archive, const std::vector<double>& cumulative_weights,
                              double xi_spread, double sigma_floor, Engine& rng) {
  const std::size_t dim = archive.front().selection.size();
  const std::size_t k = archive.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  Selection out{std::vector<std::uint8_t>(dim, 0)};
  for (std::size_t d = 0; d < dim; ++d) {
    const double u = uniform01(rng);
    auto pick = static_cast<std::size_t>(
        std::upper_bound(cumulative_weights.begin(), cumulative_weights.end(), u) - cumulative_weights.begin());
    pick = std::min(pick, k - 1);
    const double centre = archive[pick].selection.bits[d];

    double spread = 0.0;
    if (k > 1) {
      for (const auto& member : archive) spread += std::abs(member.selection.bits[d] - centre);
      spread /= static_cast<double>(k - 1);
    }
    const double sigma = std::max(sigma_floor, xi_spread * spread);
    const double value = std::clamp(centre + sigma * normal(rng), 0.0, 1.0);
    out.bits[d] = value >= 0.5 ? 1 : 0;
  }
  return out;
}

}  // namespace aco_detail

namespace {

double standard_normal_quantile(double p) {
  // Bisection on the CDF; called once per solve.
  double lo = -10.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Merges new candidates into the archive, keeping the k best distinct ones.
void update_archive(std::vector<Candidate>& archive, std::vector<Candidate> incoming, std::size_t k) {
  for (auto& c : incoming) archive.push_back(std::move(c));
  std::sort(archive.begin(), archive.end(), lexicographic_less);
  archive.erase(std::unique(archive.begin(), archive.end(),
                            [](const Candidate& a, const Candidate& b) { return a.selection == b.selection; }),
                archive.end());
  if (archive.size() > k) archive.resize(k);
}

}  // namespace

double default_sigma_floor(int dim) {
  constexpr double kMinFloor = 0.1;
  constexpr double kMaxFloor = 0.5;
  if (dim <= 2) return kMaxFloor;
  const double z = standard_normal_quantile(1.0 - 1.0 / static_cast<double>(dim));
  return std::clamp(0.5 / z, kMinFloor, kMaxFloor);
}

SolveResult solve(const Oracle& oracle, int dim, const AcoConfig& cfg, const ProgressFn& progress) {
  if (dim < 1) throw InvalidArgumentError("dimension must be >= 1");
  if (cfg.generations < 0) throw InvalidArgumentError("generations must be >= 0");
  const int ants = cfg.ants_per_generation.value_or(dim + 1);
  if (ants < 1) throw InvalidArgumentError("zero evaluation budget: ants_per_generation must be >= 1");
  const long long budget = static_cast<long long>(ants) * (cfg.generations + 1);
  const int archive_size = cfg.archive_size.value_or(std::min(ants, 63));
  if (archive_size < 1) throw InvalidArgumentError("archive_size must be >= 1");
  if (archive_size > budget) throw InvalidArgumentError("archive_size exceeds the evaluation budget");
  if (!(cfg.q_influence > 0.0)) throw InvalidArgumentError("q_influence must be > 0");
  if (!(cfg.xi_spread > 0.0)) throw InvalidArgumentError("xi_spread must be > 0");
  const double sigma_floor = cfg.sigma_floor.value_or(default_sigma_floor(dim));
  if (!(sigma_floor > 0.0)) throw InvalidArgumentError("sigma_floor must be > 0");

  const auto start = std::chrono::steady_clock::now();
  Engine rng = make_engine(cfg.seed, 0);
  MemoizedOracle cached(oracle);

  const std::vector<double> weights = aco_detail::rank_weights(archive_size, cfg.q_influence);
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  cumulative.back() = 1.0;

  SolveResult result;
  std::vector<Candidate> archive;

  for (int gen = 0; gen <= cfg.generations; ++gen) {
    // Sample the whole generation before evaluating anything.
    std::vector<Selection> ants_this_gen;
    ants_this_gen.reserve(static_cast<std::size_t>(ants));
    for (int a = 0; a < ants; ++a) {
      if (gen == 0) {
        Selection s{std::vector<std::uint8_t>(static_cast<std::size_t>(dim))};
        for (auto& b : s.bits) b = uniform01(rng) < 0.5 ? 1 : 0;
        ants_this_gen.push_back(std::move(s));
      } else {
        ants_this_gen.push_back(
            aco_detail::sample_from_archive(archive, cumulative, cfg.xi_spread, sigma_floor, rng));
      }
    }

    std::vector<Candidate> evaluated;
    evaluated.reserve(ants_this_gen.size());
    for (auto& s : ants_this_gen) {
      const Evaluation& eval = cached(s);
      ++result.evaluations_used;
      evaluated.push_back(Candidate{std::move(s), eval});
    }
    update_archive(archive, std::move(evaluated), static_cast<std::size_t>(archive_size));

    GenerationRecord record;
    record.generation = gen;
    record.best_objective = archive.front().eval.objective;
    record.best_total_violation = archive.front().eval.total_violation;
    record.oracle_calls = cached.oracle_calls();
    record.cache_hits = cached.cache_hits();
    record.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(record);
    if (progress) progress(record);
  }

  result.best_selection = archive.front().selection;
  result.best_eval = archive.front().eval;
  result.oracle_calls = cached.oracle_calls();
  result.cache_hits = cached.cache_hits();
  result.archive = std::move(archive);
  return result;
}

std::string format_progress(const GenerationRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d\t%.10g\t%.10g\t%lld\t%lld\t%.3f", r.generation, r.best_objective,
                r.best_total_violation, r.oracle_calls, r.cache_hits, r.elapsed_seconds);
  return buf;
}

}  // namespace reserve
