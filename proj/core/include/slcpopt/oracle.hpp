#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slcpopt/matching.hpp"
#include "slcpopt/problem.hpp"

namespace slcpopt {

struct OracleResult {
  double value = 0.0;
  Eigen::VectorXd argmin;
  double grid_value = 0.0;  // best value seen on the raw grid
  int grid_k = 0;
  bool refined = false;
  bool feasible_found = false;
};

// Dense k^n grid over the box, constraint-filtered, followed by projected
// gradient refinement of the best grid points. Test fixture, not a
// certified global method. grid_k = 0 selects 21 (n <= 4) or 9 (n in 5,6).
// Throws std::invalid_argument for n > 6.
OracleResult brute_force_min(const Problem& prob, int grid_k = 0, int starts = 30);

// Feasible points of the matching system: the closed-form construction plus
// seeded null-space perturbations, re-convexified along the family's
// identity-shift direction. Sample 0 is the unperturbed construction.
std::vector<SLCDecomposition> sample_feasible_decompositions(const MatchingSystem& ms,
                                                             int count, unsigned seed);

}  // namespace slcpopt
