#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>

#include "slcpopt/problem.hpp"

namespace slcpopt {

struct BnBOptions {
  double gap = 1e-4;
  double max_seconds = 600.0;
  long max_nodes = 10000;
  int workers = 0;  // 0: SLC_POPT_THREADS env var, else 1
  int local_starts = 20;
  unsigned seed = 0;
  // node relaxations run at the looser of solver_tol and gap/100: bounds only
  // need accuracy proportional to the certification target
  double solver_tol = 1e-6;
  int solver_max_iters = 60000;
};

enum class BnBStatus { Converged, NodeLimit, TimeLimit, InfeasibleProblem };

const char* to_string(BnBStatus s);

struct GlobalResult {
  BnBStatus status = BnBStatus::Converged;
  double value = std::numeric_limits<double>::infinity();  // incumbent
  Eigen::VectorXd point;
  double lower_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
  long hyperplanes = 0;  // branchings performed
  double seconds = 0.0;
};

struct BnBNode {
  Box box;  // original coordinates
  double lb = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd unit_x;   // relaxation point in node-box coordinates
  Eigen::VectorXd diag_u;   // lifted diagonal at the relaxation point
  int depth = 0;
};

// Splits on the most violated diagonal lifting entry at the relaxation
// point, clamped to [0.2, 0.8] of the edge; falls back to a midpoint split
// of the widest edge when the lifting is essentially exact.
std::pair<BnBNode, BnBNode> branch(const BnBNode& node);

// Projected gradient with backtracking on objective + exact constraint
// penalty, from x0 plus `starts` seeded uniform starts. Returns +inf value
// when no point passes the 1e-7 feasibility check.
std::pair<Eigen::VectorXd, double> local_search_upper_bound(const Problem& prob,
                                                            const Eigen::VectorXd& x0,
                                                            int starts, unsigned seed = 0);

struct NodeBound {
  double lb = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd unit_x;
  Eigen::VectorXd diag_u;
  bool usable = false;
  bool infeasible = false;
};

// Relaxation bound of the problem restricted to `box` (renormalized to the
// unit cube so the decomposition machinery applies verbatim).
NodeBound relax_over_box(const Problem& prob, const Box& box, double tol = 1e-6,
                         int max_iters = 60000);

// Best-first branch and bound; deterministic in single-worker mode.
GlobalResult solve_global(const Problem& prob, const BnBOptions& opts = {});

}  // namespace slcpopt
