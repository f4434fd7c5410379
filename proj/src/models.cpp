#include "reserve/models.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "reserve/errors.hpp"

namespace reserve {

PvaMetrics evaluate_metrics(const EvaluationContext& ctx, const Selection& selection) {
  const Habitat habitat = mask(ctx.landscape, selection);
  const PatchSet patches = extract_patches(habitat, ctx.habitat.threshold, ctx.habitat.adjacency);
  return simulate(patches, ctx.pva, ctx.eval_seed, ctx.workers);
}

Baseline compute_baseline(const EvaluationContext& ctx) {
  Baseline b;
  b.metrics = evaluate_metrics(ctx, Selection::all_ones(ctx.landscape.parcels()));
  b.cost = ctx.landscape.total_cost();
  return b;
}

void ConstrainedSpec::validate() const {
  if (!(rho_risk >= 0.0)) throw InvalidArgumentError("rho_r must be >= 0");
  if (!(rho_time > 0.0 && rho_time <= 1.0)) throw InvalidArgumentError("rho_t must lie in (0,1]");
  if (!(rho_abundance > 0.0 && rho_abundance <= 1.0)) throw InvalidArgumentError("rho_B must lie in (0,1]");
}

void MultiObjectiveSpec::validate() const {
  bool any_positive = false;
  for (double l : lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidArgumentError("lambda weights must be non-negative");
    any_positive = any_positive || l > 0.0;
  }
  if (!any_positive) throw InvalidArgumentError("at least one lambda weight must be positive");
}

std::string to_string(ModelKind kind) { return kind == ModelKind::kConstrained ? "constrained" : "multi"; }

ModelKind model_kind_from_string(const std::string& text) {
  if (text == "constrained") return ModelKind::kConstrained;
  if (text == "multi" || text == "multi-objective") return ModelKind::kMultiObjective;
  throw InvalidArgumentError("unknown model '" + text + "' (expected constrained or multi)");
}

ConstraintThresholds constraint_thresholds(const Baseline& baseline, const ConstrainedSpec& spec) {
  return ConstraintThresholds{spec.rho_risk + baseline.metrics.risk, spec.rho_time * baseline.metrics.time_median,
                              spec.rho_abundance * baseline.metrics.ema};
}

std::array<double, 3> raw_violations(const PvaMetrics& m, const ConstraintThresholds& t) {
  return {std::max(0.0, m.risk - t.max_risk), std::max(0.0, t.min_time - m.time_median),
          std::max(0.0, t.min_abundance - m.ema)};
}

std::vector<double> normalized_violations(const PvaMetrics& m, const ConstraintThresholds& t) {
  const auto raw = raw_violations(m, t);
  const std::array<double, 3> rhs{t.max_risk, t.min_time, t.min_abundance};
  std::vector<double> out(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double scale = std::abs(rhs[i]);
    out[i] = scale > 0.0 ? raw[i] / scale : raw[i];
  }
  return out;
}

Oracle constrained_oracle(const EvaluationContext& ctx, const Baseline& baseline, const ConstrainedSpec& spec) {
  spec.validate();
  const ConstraintThresholds thresholds = constraint_thresholds(baseline, spec);
  return [ctx, thresholds](const Selection& selection) {
    const double cost = selection_cost(ctx.landscape, selection);
    const PvaMetrics metrics = evaluate_metrics(ctx, selection);
    return Evaluation::make(cost, normalized_violations(metrics, thresholds), cost, metrics);
  };
}

double multiobjective_value(const MultiObjectiveSpec& spec, double cost, double baseline_cost,
                            const PvaMetrics& m, const PvaMetrics& base, int horizon) {
  const auto& l = spec.lambda;
  const double cost_term = cost / baseline_cost;
  const double time_term = 1.0 - m.time_median / static_cast<double>(horizon + 1);
  const double abundance_term = 1.0 - std::min(m.ema, base.ema) / base.ema;
  return l[0] * cost_term + l[1] * m.risk + l[2] * time_term + l[3] * abundance_term;
}

Oracle multiobjective_oracle(const EvaluationContext& ctx, const Baseline& baseline, const MultiObjectiveSpec& spec) {
  spec.validate();
  if (!(baseline.metrics.ema > 0.0)) {
    throw InvalidArgumentError("degenerate baseline: expected minimum abundance is 0, normalization undefined");
  }
  return [ctx, baseline, spec](const Selection& selection) {
    const double cost = selection_cost(ctx.landscape, selection);
    const PvaMetrics metrics = evaluate_metrics(ctx, selection);
    const double value = multiobjective_value(spec, cost, baseline.cost, metrics, baseline.metrics, ctx.pva.horizon);
    return Evaluation::make(value, {}, cost, metrics);
  };
}

Oracle make_oracle(const EvaluationContext& ctx, const Baseline& baseline, const ModelSpec& spec) {
  if (spec.kind == ModelKind::kConstrained) return constrained_oracle(ctx, baseline, spec.constrained);
  return multiobjective_oracle(ctx, baseline, spec.multi);
}

ExactResult enumerate_exact(const Oracle& oracle, int dim, int max_dim) {
  if (dim < 1) throw InvalidArgumentError("dimension must be >= 1");
  if (dim > max_dim) {
    throw InvalidArgumentError("exhaustive enumeration needs 2^" + std::to_string(dim) +
                               " evaluations; dimension " + std::to_string(dim) + " exceeds the limit of " +
                               std::to_string(max_dim));
  }
  ExactResult best;
  bool have_best = false;
  const std::uint64_t total = std::uint64_t{1} << dim;
  Selection s{std::vector<std::uint8_t>(static_cast<std::size_t>(dim), 0)};
  for (std::uint64_t code = 0; code < total; ++code) {
    // Bit 0 of the selection is the most significant bit of the code.
    for (int d = 0; d < dim; ++d) s.bits[static_cast<std::size_t>(d)] = (code >> (dim - 1 - d)) & 1U;
    Evaluation eval;
    try {
      eval = oracle(s);
    } catch (const OracleError&) {
      throw;
    } catch (const std::exception& e) {
      throw OracleError(s.to_string(), e.what());
    }
    ++best.evaluated;
    Candidate current{s, std::move(eval)};
    if (!have_best || lexicographic_less(current, Candidate{best.selection, best.eval})) {
      best.selection = std::move(current.selection);
      best.eval = std::move(current.eval);
      have_best = true;
    }
  }
  return best;
}

std::vector<ComparisonRow> RunReport::comparison() const {
  return {
      {"Total Cost", best_cost, baseline.cost},
      {"Risk", best_metrics.risk, baseline.metrics.risk},
      {"Time", best_metrics.time_median, baseline.metrics.time_median},
      {"Abundance", best_metrics.ema, baseline.metrics.ema},
  };
}

namespace {

RunReport make_report(const EvaluationContext& ctx, const ModelSpec& spec, const Baseline& baseline,
                      const Selection& best, const Evaluation& eval) {
  RunReport r;
  r.spec = spec;
  r.n = ctx.landscape.n;
  r.landscape_seed = ctx.landscape.seed;
  r.eval_seed = ctx.eval_seed;
  r.horizon = ctx.pva.horizon;
  r.baseline = baseline;
  r.best_selection = best;
  r.best_eval = eval;
  r.best_metrics = eval.metrics.value_or(PvaMetrics{});
  r.best_cost = eval.cost;
  if (spec.kind == ModelKind::kConstrained) r.thresholds = constraint_thresholds(baseline, spec.constrained);
  return r;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace

RunReport run_framework(const EvaluationContext& ctx, const ModelSpec& spec, const AcoConfig& aco,
                        const ProgressFn& progress) {
  // The baseline feeds the constraint thresholds and the multi-objective
  // normalization alike.
  const Baseline baseline = compute_baseline(ctx);
  const Oracle oracle = make_oracle(ctx, baseline, spec);
  const SolveResult solved = solve(oracle, static_cast<int>(ctx.landscape.parcels()), aco, progress);

  RunReport r = make_report(ctx, spec, baseline, solved.best_selection, solved.best_eval);
  r.solver_seed = aco.seed;
  r.evaluations_used = solved.evaluations_used;
  r.oracle_calls = solved.oracle_calls;
  r.cache_hits = solved.cache_hits;
  return r;
}

RunReport run_exact(const EvaluationContext& ctx, const ModelSpec& spec, int max_dim) {
  const int dim = static_cast<int>(ctx.landscape.parcels());
  if (dim > max_dim) {
    throw InvalidArgumentError("exhaustive enumeration needs 2^" + std::to_string(dim) + " evaluations; " +
                               std::to_string(ctx.landscape.n) + "x" + std::to_string(ctx.landscape.n) +
                               " exceeds the limit of " + std::to_string(max_dim) + " parcels");
  }
  const Baseline baseline = compute_baseline(ctx);
  const Oracle oracle = make_oracle(ctx, baseline, spec);
  const ExactResult exact = enumerate_exact(oracle, dim, max_dim);
  RunReport r = make_report(ctx, spec, baseline, exact.selection, exact.eval);
  r.evaluations_used = exact.evaluated;
  r.oracle_calls = exact.evaluated;
  return r;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_report_csv(const RunReport& report, std::ostream& out) {
  out << "quantity,solution_value,baseline_value\n";
  for (const auto& row : report.comparison()) {
    if (row.quantity == "Time") {
      out << row.quantity << ',' << format_time(row.solution, report.horizon) << ','
          << format_time(row.baseline, report.horizon) << '\n';
    } else {
      out << row.quantity << ',' << format_number(row.solution) << ',' << format_number(row.baseline) << '\n';
    }
  }
  out << "CI Half-width," << format_number(report.best_metrics.ci_halfwidth) << ','
      << format_number(report.baseline.metrics.ci_halfwidth) << '\n';
  out << "Objective," << format_number(report.best_eval.objective) << ",\n";
  out << "Total Violation," << format_number(report.best_eval.total_violation) << ",0\n";
  out << "Parcels Selected," << report.best_selection.count() << ',' << report.best_selection.size() << '\n';
}

void write_report_text(const RunReport& report, std::ostream& out) {
  const bool constrained = report.spec.kind == ModelKind::kConstrained;
  const std::string label = constrained ? "Z*_c" : "Z*_m";

  out << "Model: " << to_string(report.spec.kind);
  if (constrained) {
    const auto& c = report.spec.constrained;
    out << "  rho = [" << format_number(c.rho_risk) << ", " << format_number(c.rho_time) << ", "
        << format_number(c.rho_abundance) << "]\n";
  } else {
    const auto& l = report.spec.multi.lambda;
    out << "  lambda = [" << format_number(l[0]) << ", " << format_number(l[1]) << ", " << format_number(l[2])
        << ", " << format_number(l[3]) << "]\n";
  }
  out << "Landscape: " << report.n << "x" << report.n << "  seed " << report.landscape_seed << '\n';
  out << "Seeds: solver " << report.solver_seed << "  evaluation " << report.eval_seed << "\n\n";

  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %12s %12s\n", "", label.c_str(), "B");
  out << line;
  for (const auto& row : report.comparison()) {
    std::string sol;
    std::string base;
    if (row.quantity == "Time") {
      sol = format_time(row.solution, report.horizon);
      base = format_time(row.baseline, report.horizon);
    } else if (row.quantity == "Risk") {
      sol = format_fixed(row.solution, 3);
      base = format_fixed(row.baseline, 3);
    } else {
      sol = format_fixed(row.solution, 1);
      base = format_fixed(row.baseline, 1);
    }
    std::snprintf(line, sizeof(line), "%-12s %12s %12s\n", row.quantity.c_str(), sol.c_str(), base.c_str());
    out << line;
  }
  out << '\n';
  out << "Risk is the risk of total extinction; Time is the median time to extinction; "
         "Abundance is the expected minimum abundance.\n";
  out << "KS confidence half-width: +/-"
      << format_fixed(report.best_metrics.ci_halfwidth, 4) << '\n';
  if (constrained) {
    const auto& t = report.thresholds;
    out << "Constraints: r(Z) <= " << format_fixed(t.max_risk, 4) << ", t(Z) >= " << format_fixed(t.min_time, 2)
        << ", a(Z) >= " << format_fixed(t.min_abundance, 2) << '\n';
    const auto raw = raw_violations(report.best_metrics, t);
    out << "Violations (raw): risk " << format_fixed(raw[0], 4) << ", time " << format_fixed(raw[1], 2)
        << ", abundance " << format_fixed(raw[2], 2) << '\n';
    out << "Total normalized violation: " << format_fixed(report.best_eval.total_violation, 6)
        << (report.best_eval.feasible() ? "  (feasible)\n" : "  (infeasible)\n");
  } else {
    out << "Weighted objective: " << format_fixed(report.best_eval.objective, 6) << '\n';
  }
  out << "Parcels preserved: " << report.best_selection.count() << " of " << report.best_selection.size() << '\n';
  out << "Samples: " << report.evaluations_used << "  oracle calls: " << report.oracle_calls
      << "  cache hits: " << report.cache_hits << '\n';
}

}  // namespace reserve
