#pragma once

// The two reserve-selection programs built on top of the PVA oracle:
//
//   constrained      minimize selection cost subject to
//                      r(Z) <= rho_r + r(B)
//                      t(Z) >= rho_t * t(B)
//                      a(Z) >= rho_a * a(B)
//   multi-objective  minimize  l1 * cost/cost(B) + l2 * r(Z)
//                            + l3 * (1 - t(Z)/(horizon+1))
//                            + l4 * (1 - min(a(Z), a(B))/a(B))
//
// B is the landscape with every parcel kept; Z is B masked by the selection.
// Every candidate is simulated with the same eval_seed as the baseline.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "reserve/landscape.hpp"
#include "reserve/pva.hpp"
#include "reserve/solver.hpp"

namespace reserve {

struct HabitatOptions {
  double threshold = kDefaultHabitatThreshold;
  Adjacency adjacency = Adjacency::kFour;
};

// Everything needed to turn a selection into PVA metrics.
struct EvaluationContext {
  Landscape landscape;
  PvaConfig pva;
  HabitatOptions habitat;
  std::uint64_t eval_seed = 0;
  int workers = 1;
};

PvaMetrics evaluate_metrics(const EvaluationContext& ctx, const Selection& selection);

struct Baseline {
  PvaMetrics metrics;
  double cost = 0.0;
};

Baseline compute_baseline(const EvaluationContext& ctx);

struct ConstrainedSpec {
  double rho_risk = 0.1;
  double rho_time = 0.9;
  double rho_abundance = 0.8;
  void validate() const;
};

struct MultiObjectiveSpec {
  std::array<double, 4> lambda{0.35, 0.15, 0.15, 0.35};
  void validate() const;
};

enum class ModelKind { kConstrained, kMultiObjective };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

struct ModelSpec {
  ModelKind kind = ModelKind::kConstrained;
  ConstrainedSpec constrained;
  MultiObjectiveSpec multi;
};

// key=value text: model=constrained|multi, rho=a,b,c, lambda=a,b,c,d.
ModelSpec parse_model_spec(std::istream& in, const std::string& source = "model spec");
ModelSpec load_model_spec(const std::filesystem::path& path);

struct ConstraintThresholds {
  double max_risk = 0.0;
  double min_time = 0.0;
  double min_abundance = 0.0;
};

ConstraintThresholds constraint_thresholds(const Baseline& baseline, const ConstrainedSpec& spec);

// Raw gaps [max(0, r - max_risk), max(0, min_time - t), max(0, min_abundance - a)].
std::array<double, 3> raw_violations(const PvaMetrics& metrics, const ConstraintThresholds& thresholds);

// Raw gaps divided by the magnitude of their right-hand side (left raw when
// that side is zero).
std::vector<double> normalized_violations(const PvaMetrics& metrics, const ConstraintThresholds& thresholds);

Oracle constrained_oracle(const EvaluationContext& ctx, const Baseline& baseline, const ConstrainedSpec& spec);

// Throws InvalidArgumentError when the baseline EMA is zero.
Oracle multiobjective_oracle(const EvaluationContext& ctx, const Baseline& baseline, const MultiObjectiveSpec& spec);

double multiobjective_value(const MultiObjectiveSpec& spec, double cost, double baseline_cost,
                            const PvaMetrics& metrics, const PvaMetrics& baseline_metrics, int horizon);

Oracle make_oracle(const EvaluationContext& ctx, const Baseline& baseline, const ModelSpec& spec);

struct ExactResult {
  Selection selection;
  Evaluation eval;
  long long evaluated = 0;
};

inline constexpr int kDefaultEnumerationLimit = 16;

// Evaluates every selection of length dim. Throws InvalidArgumentError when
// dim > max_dim.
ExactResult enumerate_exact(const Oracle& oracle, int dim, int max_dim = kDefaultEnumerationLimit);

struct ComparisonRow {
  std::string quantity;
  double solution = 0.0;
  double baseline = 0.0;
};

struct RunReport {
  ModelSpec spec;
  int n = 0;
  std::uint64_t landscape_seed = 0;
  std::uint64_t solver_seed = 0;
  std::uint64_t eval_seed = 0;
  int horizon = 0;
  Baseline baseline;
  Selection best_selection;
  Evaluation best_eval;
  PvaMetrics best_metrics;
  double best_cost = 0.0;
  ConstraintThresholds thresholds;  // constrained model only
  long long evaluations_used = 0;
  long long oracle_calls = 0;
  long long cache_hits = 0;

  // Total Cost, Risk, Time, Abundance.
  std::vector<ComparisonRow> comparison() const;
  bool infeasible() const { return spec.kind == ModelKind::kConstrained && !best_eval.feasible(); }
};

RunReport run_framework(const EvaluationContext& ctx, const ModelSpec& spec, const AcoConfig& aco,
                        const ProgressFn& progress = {});

// Same report schema, best selection found by exhaustive enumeration.
RunReport run_exact(const EvaluationContext& ctx, const ModelSpec& spec, int max_dim = kDefaultEnumerationLimit);

// CSV with columns quantity,solution_value,baseline_value.
void write_report_csv(const RunReport& report, std::ostream& out);
// Comparison table as plain text.
void write_report_text(const RunReport& report, std::ostream& out);

// Shortest decimal that round-trips.
std::string format_number(double value);

}  // namespace reserve
