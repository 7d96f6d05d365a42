#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "slcpopt/bestslc.hpp"
#include "slcpopt/bnb.hpp"
#include "slcpopt/formats.hpp"
#include "slcpopt/instance_gen.hpp"
#include "slcpopt/oracle.hpp"
#include "slcpopt/problem.hpp"
#include "slcpopt/report.hpp"

namespace {

using namespace slcpopt;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int region_degree(const Problem& unit) {
  int d = std::clamp(unit.objective.degree(), 3, kMaxDegree);
  for (const Constraint& c : unit.constraints)
    if (c.kind == ConstraintKind::PolynomialIneq)
      d = std::max(d, std::max(3, c.poly.degree()));
  return d;
}

// Root relaxation of the full problem as one conic program. Log-sum-exp
// constraints become exponential-cone rows in original coordinates:
// u_i >= exp(x_i - alpha), sum u_i <= 1.
ConicProgram build_root_program(const Problem& prob) {
  NormalizedProblem norm = normalize_to_unit(prob);
  const std::vector<Polynomial> polys = polynomial_rows(norm.unit);
  const int d_obj = std::clamp(norm.unit.objective.degree(), 3, kMaxDegree);
  LiftedRegion region =
      generate_lifted_region(prob.n, linear_rows(norm.unit), region_degree(norm.unit));
  DualModel model = build_best_slc_program(norm.unit.objective, region, d_obj, polys);
  ConicProgram prog = std::move(model.prog);
  for (const Constraint& c : prob.constraints) {
    if (c.kind != ConstraintKind::LogSumExp) continue;
    const int u0 = prog.add_vars(prob.n);
    LinExpr budget;
    budget.c0 = 1.0;
    for (int i = 0; i < prob.n; ++i) {
      LinExpr t;
      t.add(u0 + i, 1.0);
      LinExpr one;
      one.c0 = 1.0;
      LinExpr v;  // x_i in original coordinates, minus alpha
      v.c0 = norm.original.lower(i) - c.alpha;
      v.add(i, norm.original.upper(i) - norm.original.lower(i));
      prog.add_exp(t, one, v);
      budget.add(u0 + i, -1.0);
    }
    prog.add_nonneg(budget);
  }
  return prog;
}

std::string export_program(const Problem& prob, const std::string& format) {
  ConicProgram prog = build_root_program(prob);
  if (format == "cbf") return export_cbf(prog);
  if (format == "sdpa") {
    if (prog.has_exp())
      throw UnsupportedConeError(
          "sdpa cannot encode log-sum-exp constraints; use --format cbf");
    return export_sdpa(prog);
  }
  throw std::runtime_error("unknown format '" + format + "' (expected cbf or sdpa)");
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

int cmd_solve(const std::string& file, const BnBOptions& opts,
              const std::string& backend, const std::string& out, bool stable) {
  Problem prob = parse_problem(read_file(file));
  if (backend == "export-cbf" || backend == "export-sdpa") {
    write_output(out, export_program(prob, backend.substr(7)));
    return 0;
  }
  if (backend != "embedded")
    throw std::runtime_error("unknown backend '" + backend + "'");
  if (prob.has_log_sum_exp())
    throw std::runtime_error(
        "the embedded backend does not handle log-sum-exp constraints; "
        "use --backend export-cbf");
  GlobalResult res = solve_global(prob, opts);
  std::cout << report_table(res, stable) << "\n" << report_json(res, "solve", stable);
  return 0;
}

std::string key_label(const BlockKey& key) {
  if (key.affine_id >= 0) return "row " + std::to_string(key.affine_id);
  if (key.xs.empty() && key.ones.empty()) return "1";
  std::string s;
  for (int i : key.xs) s += (s.empty() ? "" : " ") + ("x" + std::to_string(i + 1));
  for (int j : key.ones)
    s += (s.empty() ? "" : " ") + ("(1-x" + std::to_string(j + 1) + ")");
  return s;
}

int cmd_decompose(const std::string& file, int degree, const std::string& form) {
  Problem prob = parse_problem(read_file(file));
  NormalizedProblem norm = normalize_to_unit(prob);
  const Polynomial& p = norm.unit.objective;
  const int d = degree > 0 ? degree : std::clamp(p.degree(), 3, kMaxDegree);
  SLCDecomposition dec =
      form == "first" ? construct_slc_first_type(p) : construct_slc(p, d);
  Polynomial resid = dec.reconstruct() - p;
  std::cout << "variables    " << dec.n << "\n";
  std::cout << "degree       " << dec.degree << "\n";
  std::cout << "form         " << (dec.form == SlcForm::FirstType ? "first" : "product")
            << "\n";
  std::cout << "blocks       " << dec.blocks.size() << "\n";
  std::cout << "alpha        " << fmt9(dec.alpha) << "\n";
  std::cout << "residual     " << fmt9(resid.l1_norm()) << "\n";
  std::cout << "convex       " << (dec.all_blocks_convex(1e-7) ? "yes" : "no") << "\n";
  int idx = 0;
  for (const auto& [key, block] : dec.blocks) {
    std::cout << "block " << ++idx << ": " << key_label(key) << "\n";
    std::cout << "  Q:";
    for (int i = 0; i < dec.n; ++i)
      for (int j = 0; j < dec.n; ++j) std::cout << " " << fmt9(block.Q(i, j));
    std::cout << "\n  r:";
    for (int i = 0; i < dec.n; ++i) std::cout << " " << fmt9(block.r(i));
    std::cout << "\n  w: " << fmt9(block.w) << "\n";
    if (block.has_higher()) std::cout << "  higher: " << block.higher.to_string() << "\n";
  }
  return 0;
}

int cmd_relax(const std::string& file, double tol, int max_iters) {
  Problem prob = parse_problem(read_file(file));
  if (prob.has_log_sum_exp())
    throw std::runtime_error(
        "the embedded backend does not handle log-sum-exp constraints; "
        "use the export command");
  NodeBound nb = relax_over_box(prob, prob.box, tol, max_iters);
  if (nb.infeasible) {
    std::cout << "status       infeasible\n";
    return 0;
  }
  if (!nb.usable) throw std::runtime_error("root relaxation did not solve");
  std::cout << "status       solved\n";
  std::cout << "lower_bound  " << fmt9(nb.lb) << "\n";
  std::cout << "point       ";
  const Eigen::VectorXd w = prob.box.upper - prob.box.lower;
  for (int i = 0; i < prob.n; ++i)
    std::cout << " " << fmt9(prob.box.lower(i) + w(i) * nb.unit_x(i));
  std::cout << "\n";
  return 0;
}

int cmd_verify(const std::string& file, const BnBOptions& opts, int grid, int starts) {
  Problem prob = parse_problem(read_file(file));
  GlobalResult res = solve_global(prob, opts);
  OracleResult oracle = brute_force_min(prob, grid, starts);
  const double rel =
      std::abs(res.value - oracle.value) / std::max(1.0, std::abs(oracle.value));
  std::cout << "solver  " << fmt9(res.value) << "\n";
  std::cout << "oracle  " << fmt9(oracle.value) << "\n";
  std::cout << "rel_err " << fmt9(rel) << "\n";
  if (rel > 1e-3) {
    std::cout << "verify: FAIL\n";
    return 1;
  }
  std::cout << "verify: PASS\n";
  return 0;
}

int cmd_bench(int n, int degree, int seeds, unsigned base_seed, double density,
              bool constrained, double tol, bool stable) {
  if (density <= 0.0) density = default_density(degree);
  std::cout << bench_csv_header();
  for (int k = 0; k < seeds; ++k) {
    const unsigned seed = base_seed + static_cast<unsigned>(k);
    const auto t0 = std::chrono::steady_clock::now();
    Problem prob = generate_instance(n, degree, density, seed, constrained);
    NormalizedProblem norm = normalize_to_unit(prob);
    const Polynomial& p = norm.unit.objective;
    const int d = std::clamp(p.degree(), 3, kMaxDegree);
    LiftedRegion region =
        generate_lifted_region(n, linear_rows(norm.unit), region_degree(norm.unit));
    SolveOptions sopts;
    sopts.tol = tol;

    DualModel best = build_best_slc_program(p, region, d, polynomial_rows(norm.unit));
    ConicSolution bs = solve(best.prog, sopts);
    const double best_lb = bs.usable() ? bs.objective : std::nan("");

    SLCDecomposition dec = construct_slc(p, d);
    ConicSolution cs = solve(build_fixed_decomposition_program(dec, region), sopts);
    const double cons_lb = cs.usable() ? cs.objective : std::nan("");

    MatchingSystem ms = build_matching_system(p, d);
    auto samples = sample_feasible_decompositions(ms, 2, seed);
    ConicSolution rs =
        solve(build_fixed_decomposition_program(samples.back(), region), sopts);
    const double rand_lb = rs.usable() ? rs.objective : std::nan("");

    Eigen::VectorXd center = 0.5 * (prob.box.lower + prob.box.upper);
    const double ub = local_search_upper_bound(prob, center, 10, seed).second;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << bench_csv_row(seed, n, degree, best_lb, cons_lb, rand_lb, ub, secs,
                               stable);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global polynomial optimization over boxes via convex relaxations"};
  app.require_subcommand(1);

  std::string file, out, format = "cbf", backend = "embedded", form = "product";
  bool stable = false, constrained = false;
  int degree = 0, grid = 0, starts = 30, seeds = 10, bench_n = 3, bench_degree = 3;
  double density = 0.0;
  BnBOptions opts;

  auto add_budget_flags = [&](CLI::App* cmd) {
    cmd->add_option("--gap", opts.gap, "relative gap target")
        ->check(CLI::Range(1e-12, 1.0));
    cmd->add_option("--max-time", opts.max_seconds, "time budget in seconds")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-nodes", opts.max_nodes, "node budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--starts", opts.local_starts, "local search starts");
    cmd->add_option("--tol", opts.solver_tol, "conic solver tolerance");
  };

  CLI::App* solve = app.add_subcommand("solve", "globally minimize a problem file");
  solve->add_option("file", file)->required();
  add_budget_flags(solve);
  solve->add_option("--backend", backend, "embedded | export-cbf | export-sdpa");
  solve->add_option("--out", out, "output path for export backends");
  solve->add_flag("--stable-output", stable, "zero wall-clock fields");

  CLI::App* dec = app.add_subcommand("decompose", "print the objective's decomposition");
  dec->add_option("file", file)->required();
  dec->add_option("--degree", degree, "family degree (default: objective degree)");
  dec->add_option("--form", form, "product | first");

  CLI::App* relax = app.add_subcommand("relax", "root relaxation bound only");
  relax->add_option("file", file)->required();
  relax->add_option("--tol", opts.solver_tol, "conic solver tolerance");
  relax->add_option("--max-iters", opts.solver_max_iters, "conic iteration cap");

  CLI::App* exp = app.add_subcommand("export", "write the root relaxation to a file");
  exp->add_option("file", file)->required();
  exp->add_option("--format", format, "cbf | sdpa");
  exp->add_option("--out", out, "output path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "compare against the grid oracle");
  verify->add_option("file", file)->required();
  add_budget_flags(verify);
  verify->add_option("--grid", grid, "grid points per axis (0: auto)");
  verify->add_option("--oracle-starts", starts, "oracle refinement starts");

  CLI::App* bench = app.add_subcommand("bench", "random-instance bound sweep (CSV)");
  bench->add_option("--n", bench_n, "variables")->check(CLI::Range(1, 16));
  bench->add_option("--degree", bench_degree, "objective degree")
      ->check(CLI::Range(3, kMaxDegree));
  bench->add_option("--seeds", seeds, "instance count")->check(CLI::PositiveNumber);
  bench->add_option("--seed", opts.seed, "base seed");
  bench->add_option("--density", density, "monomial density (default 0.5 / 0.2)");
  bench->add_flag("--constrained", constrained, "add one cubic constraint");
  bench->add_option("--tol", opts.solver_tol, "conic solver tolerance");
  bench->add_flag("--stable-output", stable, "zero wall-clock fields");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(file, opts, backend, out, stable);
    if (dec->parsed()) return cmd_decompose(file, degree, form);
    if (relax->parsed()) return cmd_relax(file, opts.solver_tol, opts.solver_max_iters);
    if (exp->parsed()) {
      Problem prob = parse_problem(read_file(file));
      write_output(out, export_program(prob, format));
      return 0;
    }
    if (verify->parsed()) return cmd_verify(file, opts, grid, starts);
    if (bench->parsed())
      return cmd_bench(bench_n, bench_degree, seeds, opts.seed, density, constrained,
                       opts.solver_tol, stable);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
