#include "slcpopt/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <queue>
#include <random>
#include <thread>
#include <vector>

#include "slcpopt/bestslc.hpp"
#include "slcpopt/conic.hpp"
#include "slcpopt/lifting.hpp"

namespace slcpopt {

const char* to_string(BnBStatus s) {
  switch (s) {
    case BnBStatus::Converged:
      return "converged";
    case BnBStatus::NodeLimit:
      return "node_limit";
    case BnBStatus::TimeLimit:
      return "time_limit";
    case BnBStatus::InfeasibleProblem:
      return "infeasible";
  }
  return "unknown";
}

namespace {

constexpr double kFeasTol = 1e-7;

double canonical_double(std::mt19937& rng) {
  const double hi = static_cast<double>(rng() >> 5);
  const double lo = static_cast<double>(rng() >> 6);
  return (hi * 67108864.0 + lo) / 9007199254740992.0;
}

double penalty_value(const Problem& prob, const Eigen::VectorXd& x, double mu) {
  double v = prob.objective.evaluate(x);
  for (const auto& c : prob.constraints) {
    const double h = c.kind == ConstraintKind::LogSumExp ? log_sum_exp(x) - c.alpha
                                                         : c.poly.evaluate(x);
    if (h > 0) v += mu * h;
  }
  return v;
}

Eigen::VectorXd penalty_gradient(const Problem& prob, const Eigen::VectorXd& x, double mu) {
  Eigen::VectorXd g = prob.objective.gradient(x);
  for (const auto& c : prob.constraints) {
    if (c.kind == ConstraintKind::LogSumExp) {
      if (log_sum_exp(x) - c.alpha > 0) {
        Eigen::VectorXd e = (x.array() - x.maxCoeff()).exp();
        g += mu * (e / e.sum()).matrix();
      }
    } else if (c.poly.evaluate(x) > 0) {
      g += mu * c.poly.gradient(x);
    }
  }
  return g;
}

Eigen::VectorXd descend(const Problem& prob, Eigen::VectorXd x, double mu, int iters) {
  const double edge = (prob.box.upper - prob.box.lower).maxCoeff();
  double step = 0.25 * std::max(edge, 1e-6);
  double fx = penalty_value(prob, x, mu);
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd g = penalty_gradient(prob, x, mu);
    if (g.norm() < 1e-13) break;
    double t = step;
    bool moved = false;
    for (int bt = 0; bt < 45; ++bt) {
      Eigen::VectorXd cand = prob.box.clamp(x - t * g);
      const double fc = penalty_value(prob, cand, mu);
      if (fc < fx - 1e-12 * (1.0 + std::abs(fx))) {
        step = std::min(2.0 * t, 4.0 * edge);
        x = std::move(cand);
        fx = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

int worker_count(const BnBOptions& opts) {
  if (opts.workers > 0) return opts.workers;
  if (const char* env = std::getenv("SLC_POPT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace

std::pair<Eigen::VectorXd, double> local_search_upper_bound(const Problem& prob,
                                                            const Eigen::VectorXd& x0,
                                                            int starts, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<Eigen::VectorXd> inits;
  inits.push_back(prob.box.clamp(x0));
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x(prob.n);
    for (int i = 0; i < prob.n; ++i)
      x(i) = prob.box.lower(i) +
             canonical_double(rng) * (prob.box.upper(i) - prob.box.lower(i));
    inits.push_back(std::move(x));
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = inits.front();
  for (const auto& init : inits) {
    Eigen::VectorXd x = descend(prob, init, 1e4, 250);
    if (prob.max_violation(x) > kFeasTol) x = descend(prob, x, 1e6, 100);
    if (prob.max_violation(x) > kFeasTol) continue;
    const double v = prob.objective.evaluate(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

NodeBound relax_over_box(const Problem& prob, const Box& box, double tol, int max_iters) {
  Problem scoped = prob;
  scoped.box = box;
  const NormalizedProblem norm = normalize_to_unit(scoped);

  const int n = prob.n;
  const int d_obj = std::clamp(norm.unit.objective.degree(), 3, kMaxDegree);
  const std::vector<Polynomial> polys = polynomial_rows(norm.unit);
  int d_region = d_obj;
  for (const auto& rho : polys) d_region = std::max(d_region, std::max(3, rho.degree()));

  const LiftedRegion region = generate_lifted_region(n, linear_rows(norm.unit), d_region);
  const DualModel model = build_best_slc_program(norm.unit.objective, region, d_obj, polys);

  SolveOptions sopts;
  sopts.tol = tol;
  sopts.max_iters = max_iters;
  const ConicSolution sol = solve(model.prog, sopts);

  NodeBound out;
  if (sol.status == SolveStatus::Infeasible) {
    out.infeasible = true;
    out.lb = std::numeric_limits<double>::infinity();
    return out;
  }
  if (!sol.usable()) return out;

  const ExtractedPoint pt = extract_bound_and_point(model, sol);
  out.lb = pt.lb;
  out.unit_x = pt.x;
  out.diag_u = pt.u.diagonal();
  out.usable = true;
  return out;
}

std::pair<BnBNode, BnBNode> branch(const BnBNode& node) {
  const int n = node.box.dim();
  int split = -1;
  double worst = 1e-9;
  if (node.unit_x.size() == n && node.diag_u.size() == n) {
    for (int i = 0; i < n; ++i) {
      const double viol = std::abs(node.diag_u(i) - node.unit_x(i) * node.unit_x(i));
      if (viol > worst) {
        worst = viol;
        split = i;
      }
    }
  }

  double frac = 0.5;
  if (split < 0) {
    // lifting is essentially exact: midpoint of the widest edge
    double widest = -1.0;
    for (int i = 0; i < n; ++i) {
      const double w = node.box.upper(i) - node.box.lower(i);
      if (w > widest) {
        widest = w;
        split = i;
      }
    }
  } else {
    frac = std::clamp(node.unit_x(split), 0.2, 0.8);
  }

  const double lo = node.box.lower(split);
  const double hi = node.box.upper(split);
  const double mid = lo + frac * (hi - lo);

  BnBNode left = node;
  BnBNode right = node;
  left.box.upper(split) = mid;
  right.box.lower(split) = mid;
  left.depth = right.depth = node.depth + 1;
  return {std::move(left), std::move(right)};
}

GlobalResult solve_global(const Problem& prob, const BnBOptions& opts) {
  if (prob.has_log_sum_exp())
    throw UnsupportedConeError(
        "log-sum-exp constraints are export-only; use an export backend");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  GlobalResult res;
  const double node_tol = std::max(opts.solver_tol, 0.01 * opts.gap);
  const Eigen::VectorXd center = 0.5 * (prob.box.lower + prob.box.upper);
  auto [x_inc, ub_inc] = local_search_upper_bound(prob, center, opts.local_starts, opts.seed);
  res.value = ub_inc;
  res.point = x_inc;

  struct Ordering {
    bool operator()(const BnBNode& a, const BnBNode& b) const { return a.lb > b.lb; }
  };
  std::priority_queue<BnBNode, std::vector<BnBNode>, Ordering> open;
  {
    BnBNode root;
    root.box = prob.box;
    open.push(std::move(root));
  }

  std::mutex mu;
  std::condition_variable cv;
  int busy = 0;
  bool stop = false;
  double closed_lb = std::numeric_limits<double>::infinity();
  long nodes = 0, hyperplanes = 0;
  BnBStatus status = BnBStatus::Converged;

  auto rel_gap = [](double ub, double lb) {
    if (!std::isfinite(ub)) return std::numeric_limits<double>::infinity();
    return (ub - lb) / std::max(1.0, std::abs(ub));
  };

  auto work = [&](int worker_id) {
    std::unique_lock<std::mutex> lk(mu);
    while (true) {
      cv.wait(lk, [&] { return stop || !open.empty() || busy == 0; });
      if (stop || (open.empty() && busy == 0)) return;
      if (open.empty()) continue;

      if (nodes >= opts.max_nodes) {
        status = BnBStatus::NodeLimit;
        stop = true;
        cv.notify_all();
        return;
      }
      if (elapsed() > opts.max_seconds) {
        status = BnBStatus::TimeLimit;
        stop = true;
        cv.notify_all();
        return;
      }

      BnBNode node = open.top();
      open.pop();
      ++nodes;
      if (rel_gap(res.value, node.lb) <= opts.gap) {
        closed_lb = std::min(closed_lb, node.lb);
        continue;
      }
      ++busy;
      lk.unlock();

      NodeBound nb = relax_over_box(prob, node.box, node_tol, opts.solver_max_iters);
      Eigen::VectorXd cand;
      double cand_val = std::numeric_limits<double>::infinity();
      if (!nb.infeasible) {
        Eigen::VectorXd start;
        if (nb.usable)
          start = node.box.lower + (node.box.upper - node.box.lower).cwiseProduct(nb.unit_x);
        else
          start = 0.5 * (node.box.lower + node.box.upper);
        std::tie(cand, cand_val) = local_search_upper_bound(
            prob, start, std::max(1, opts.local_starts / 4),
            opts.seed + static_cast<unsigned>(nodes + worker_id));
      }

      lk.lock();
      --busy;
      if (cand_val < res.value) {
        res.value = cand_val;
        res.point = cand;
      }
      if (nb.infeasible) {
        cv.notify_all();
        continue;
      }
      const double node_lb = nb.usable ? std::max(node.lb, nb.lb) : node.lb;
      if (rel_gap(res.value, node_lb) <= opts.gap) {
        closed_lb = std::min(closed_lb, node_lb);
        cv.notify_all();
        continue;
      }
      BnBNode solved = node;
      solved.lb = node_lb;
      solved.unit_x = nb.unit_x;
      solved.diag_u = nb.diag_u;
      auto [left, right] = branch(solved);
      ++hyperplanes;
      open.push(std::move(left));
      open.push(std::move(right));
      cv.notify_all();
    }
  };

  const int workers = worker_count(opts);
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  double open_lb = std::numeric_limits<double>::infinity();
  while (!open.empty()) {
    open_lb = std::min(open_lb, open.top().lb);
    open.pop();
  }
  res.lower_bound = std::min({closed_lb, open_lb, res.value});
  if (!std::isfinite(res.lower_bound) && res.lower_bound > 0) {
    // every region was pruned as infeasible and no incumbent exists
    res.status = BnBStatus::InfeasibleProblem;
    res.lower_bound = res.value;
    res.gap = 0.0;
    res.nodes = nodes;
    res.hyperplanes = hyperplanes;
    res.seconds = elapsed();
    return res;
  }
  res.status = std::isfinite(res.value) || status != BnBStatus::Converged
                   ? status
                   : BnBStatus::InfeasibleProblem;
  res.gap = rel_gap(res.value, res.lower_bound);
  res.nodes = nodes;
  res.hyperplanes = hyperplanes;
  res.seconds = elapsed();
  return res;
}

}  // namespace slcpopt
