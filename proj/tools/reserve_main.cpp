// reserve: generate landscapes, compute baselines, solve and render.
//
// Exit codes: 0 success, 1 error, 2 constrained best selection infeasible.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "reserve/config_io.hpp"
#include "reserve/errors.hpp"
#include "reserve/landscape.hpp"
#include "reserve/models.hpp"
#include "reserve/pva.hpp"
#include "reserve/random.hpp"
#include "reserve/render.hpp"

namespace fs = std::filesystem;
using namespace reserve;

namespace {

constexpr const char* kToolVersion = "reserve 1.0.0";
constexpr int kExitInfeasible = 2;

struct Options {
  int n = 10;
  std::uint64_t seed = 0;
  std::string land;
  std::string out;
  std::string selection;
  std::string pva_path;
  std::string spec_path;
  std::string model;
  std::string rho;
  std::string lambda;
  std::optional<int> generations;
  std::optional<int> ants;
  std::optional<int> replicates;
  std::optional<int> horizon;
  int workers = 1;
  double threshold = kDefaultHabitatThreshold;
  int adjacency = 4;
  int scale = 8;
  std::string mode = "suitability";
  std::string trace;
  int trace_replicates = 1;
};

struct Seeds {
  std::uint64_t master = 0;
  std::uint64_t solver = 0;
  std::uint64_t eval = 0;
};

Seeds derive_run_seeds(std::uint64_t master) {
  return {master, derive_seed(master, stream::kSolver), derive_seed(master, stream::kEvaluation)};
}

std::string header_line(const std::string& subcommand, const Seeds& seeds, std::optional<std::uint64_t> land_seed) {
  std::ostringstream h;
  h << kToolVersion << ' ' << subcommand << " seed=" << seeds.master;
  if (land_seed) h << " landscape_seed=" << *land_seed;
  h << " solver_seed=" << seeds.solver << " eval_seed=" << seeds.eval;
  return h.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

PvaConfig resolve_pva(const Options& o) {
  PvaConfig cfg = o.pva_path.empty() ? PvaConfig{} : load_pva_config(o.pva_path);
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.horizon) cfg.horizon = *o.horizon;
  cfg.validate();
  return cfg;
}

ModelSpec resolve_spec(const Options& o) {
  ModelSpec spec = o.spec_path.empty() ? ModelSpec{} : load_model_spec(o.spec_path);
  if (!o.model.empty()) spec.kind = model_kind_from_string(o.model);
  if (!o.rho.empty()) {
    const auto r = parse_number_list(o.rho, 3);
    spec.constrained = ConstrainedSpec{r[0], r[1], r[2]};
  }
  if (!o.lambda.empty()) {
    const auto l = parse_number_list(o.lambda, 4);
    spec.multi.lambda = {l[0], l[1], l[2], l[3]};
  }
  spec.constrained.validate();
  spec.multi.validate();
  return spec;
}

HabitatOptions resolve_habitat(const Options& o) {
  return HabitatOptions{o.threshold, adjacency_from_int(o.adjacency)};
}

EvaluationContext make_context(const Options& o, const Seeds& seeds) {
  if (o.land.empty()) throw InvalidArgumentError("--land is required");
  EvaluationContext ctx;
  ctx.landscape = load_landscape(o.land);
  ctx.pva = resolve_pva(o);
  ctx.habitat = resolve_habitat(o);
  ctx.eval_seed = seeds.eval;
  ctx.workers = o.workers;
  return ctx;
}

int cmd_generate(const Options& o) {
  if (o.out.empty()) throw InvalidArgumentError("--out is required");
  const Landscape land = generate_landscape(o.n, o.seed);
  const Seeds seeds = derive_run_seeds(o.seed);
  save_landscape(land, o.out, "# " + header_line("gen", seeds, land.seed));
  std::cerr << "wrote " << o.out << " (" << land.n << "x" << land.n << ", total cost "
            << format_number(land.total_cost()) << ")\n";
  return 0;
}

void write_maps(const fs::path& dir, const EvaluationContext& ctx, const Selection& best, int scale,
                const std::string& header) {
  const Habitat full = full_habitat(ctx.landscape);
  const Habitat masked = mask(ctx.landscape, best);
  {
    auto out = open_output(dir / "map_B.pgm");
    write_suitability_pgm(full, scale, out, header);
  }
  {
    auto out = open_output(dir / "map_Z.pgm");
    write_suitability_pgm(masked, scale, out, header);
  }
  {
    auto out = open_output(dir / "patches_B.ppm");
    write_patches_ppm(extract_patches(full, ctx.habitat.threshold, ctx.habitat.adjacency), scale, out, header);
  }
  {
    auto out = open_output(dir / "patches_Z.ppm");
    write_patches_ppm(extract_patches(masked, ctx.habitat.threshold, ctx.habitat.adjacency), scale, out, header);
  }
}

void write_run_outputs(const fs::path& dir, const EvaluationContext& ctx, const RunReport& report, int scale,
                       const std::string& header) {
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "report.csv");
    out << "# " << header << '\n';
    write_report_csv(report, out);
  }
  {
    auto out = open_output(dir / "report.txt");
    out << "# " << header << '\n';
    write_report_text(report, out);
  }
  {
    auto out = open_output(dir / "selection.txt");
    out << "# " << header << '\n';
    save_selection(report.best_selection, report.n, out);
  }
  write_maps(dir, ctx, report.best_selection, scale, header);
}

int cmd_solve(const Options& o, bool exhaustive) {
  if (o.out.empty()) throw InvalidArgumentError("--out is required");
  const Seeds seeds = derive_run_seeds(o.seed);
  const EvaluationContext ctx = make_context(o, seeds);
  const ModelSpec spec = resolve_spec(o);

  RunReport report;
  std::string subcommand;
  if (exhaustive) {
    subcommand = "enumerate";
    report = run_exact(ctx, spec);
    report.solver_seed = seeds.solver;
  } else {
    subcommand = "solve";
    AcoConfig aco;
    aco.generations = o.generations.value_or(10);
    aco.ants_per_generation = o.ants;
    aco.seed = seeds.solver;
    aco.eval_seed = seeds.eval;
    std::cerr << "generation\tbest_objective\tbest_total_violation\toracle_calls\tcache_hits\telapsed_seconds\n";
    report = run_framework(ctx, spec, aco, [](const GenerationRecord& r) { std::cerr << format_progress(r) << '\n'; });
  }

  const std::string header = header_line(subcommand, seeds, ctx.landscape.seed) + " model=" + to_string(spec.kind);
  write_run_outputs(o.out, ctx, report, o.scale, header);
  if (!o.trace.empty()) {
    auto out = open_output(o.trace);
    const Habitat z = mask(ctx.landscape, report.best_selection);
    write_trace_csv(extract_patches(z, ctx.habitat.threshold, ctx.habitat.adjacency), ctx.pva, ctx.eval_seed,
                    o.trace_replicates, out);
  }
  write_report_text(report, std::cerr);
  return report.infeasible() ? kExitInfeasible : 0;
}

int cmd_baseline(const Options& o) {
  if (o.out.empty()) throw InvalidArgumentError("--out is required");
  const Seeds seeds = derive_run_seeds(o.seed);
  const EvaluationContext ctx = make_context(o, seeds);
  const Baseline b = compute_baseline(ctx);
  fs::create_directories(o.out);
  auto out = open_output(fs::path(o.out) / "baseline.csv");
  out << "# " << header_line("baseline", seeds, ctx.landscape.seed) << '\n';
  out << "quantity,baseline_value\n";
  out << "Total Cost," << format_number(b.cost) << '\n';
  out << "Risk," << format_number(b.metrics.risk) << '\n';
  out << "Time," << format_time(b.metrics.time_median, ctx.pva.horizon) << '\n';
  out << "Abundance," << format_number(b.metrics.ema) << '\n';
  out << "CI Half-width," << format_number(b.metrics.ci_halfwidth) << '\n';
  std::cerr << "baseline: cost " << format_number(b.cost) << " risk " << format_number(b.metrics.risk) << " time "
            << format_time(b.metrics.time_median, ctx.pva.horizon) << " abundance " << format_number(b.metrics.ema)
            << '\n';
  return 0;
}

int cmd_render(const Options& o) {
  if (o.land.empty()) throw InvalidArgumentError("--land is required");
  if (o.out.empty()) throw InvalidArgumentError("--out is required");
  if (o.mode != "suitability" && o.mode != "patches") {
    throw InvalidArgumentError("unknown render mode '" + o.mode + "' (expected suitability or patches)");
  }
  const Landscape land = load_landscape(o.land);
  const Habitat habitat = o.selection.empty() ? full_habitat(land) : mask(land, load_selection(o.selection, land.n));
  const Seeds seeds = derive_run_seeds(o.seed);
  const std::string header = header_line("render", seeds, land.seed) + " mode=" + o.mode;
  auto out = open_output(o.out);
  if (o.mode == "suitability") {
    write_suitability_pgm(habitat, o.scale, out, header);
  } else {
    write_patches_ppm(extract_patches(habitat, o.threshold, adjacency_from_int(o.adjacency)), o.scale, out, header);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reserve selection with a black-box metapopulation oracle"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Master seed"); };
  auto add_eval = [&](CLI::App* sub) {
    sub->add_option("--land", o.land, "Landscape file")->required();
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--pva", o.pva_path, "PVA config (key=value)");
    sub->add_option("--replicates", o.replicates, "Simulation replicates");
    sub->add_option("--horizon", o.horizon, "Simulation horizon in years");
    sub->add_option("--workers", o.workers, "Simulation threads")->check(CLI::PositiveNumber);
    sub->add_option("--threshold", o.threshold, "Habitability threshold");
    sub->add_option("--adjacency", o.adjacency, "Patch adjacency (4 or 8)")->check(CLI::IsMember({4, 8}));
    add_seed(sub);
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "constrained or multi")->check(CLI::IsMember({"constrained", "multi"}));
    sub->add_option("--spec", o.spec_path, "Model spec file (key=value)");
    sub->add_option("--rho", o.rho, "Constraint gaps rho_r,rho_t,rho_B");
    sub->add_option("--lambda", o.lambda, "Objective weights l1,l2,l3,l4");
    sub->add_option("--scale", o.scale, "Pixels per parcel in maps")->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("gen", "Generate a random landscape");
  gen->add_option("--n", o.n, "Side length")->required();
  gen->add_option("--out", o.out, "Landscape file to write")->required();
  add_seed(gen);

  auto* baseline = app.add_subcommand("baseline", "PVA metrics of the full landscape");
  add_eval(baseline);

  auto* solve_cmd = app.add_subcommand("solve", "Optimize with extended ant colony optimization");
  add_eval(solve_cmd);
  add_model(solve_cmd);
  solve_cmd->add_option("--generations", o.generations, "ACO generations g")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--ants", o.ants, "Ants per generation (default n*n+1)")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--trace", o.trace, "Write a per-year abundance trace CSV of the best habitat");
  solve_cmd->add_option("--trace-replicates", o.trace_replicates, "Replicates included in the trace");

  auto* enumerate = app.add_subcommand("enumerate", "Exhaustive optimum for tiny landscapes");
  add_eval(enumerate);
  add_model(enumerate);

  auto* render = app.add_subcommand("render", "Render a suitability or patch map");
  render->add_option("--land", o.land, "Landscape file")->required();
  render->add_option("--selection", o.selection, "Selection file to mask the landscape with");
  render->add_option("--mode", o.mode, "suitability or patches");
  render->add_option("--out", o.out, "Image file to write")->required();
  render->add_option("--scale", o.scale, "Pixels per parcel")->check(CLI::PositiveNumber);
  render->add_option("--threshold", o.threshold, "Habitability threshold");
  render->add_option("--adjacency", o.adjacency, "Patch adjacency (4 or 8)")->check(CLI::IsMember({4, 8}));
  add_seed(render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (baseline->parsed()) return cmd_baseline(o);
    if (solve_cmd->parsed()) return cmd_solve(o, false);
    if (enumerate->parsed()) return cmd_solve(o, true);
    if (render->parsed()) return cmd_render(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
