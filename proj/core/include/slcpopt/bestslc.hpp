#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "slcpopt/conic.hpp"
#include "slcpopt/lifting.hpp"
#include "slcpopt/matching.hpp"

namespace slcpopt {

struct VarSpan {
  int start = 0;
  int count = 0;
};

// Dual footprint of one matching system inside the master program: free
// multipliers for the equality rows, one symmetric matrix multiplier per
// family block (svec entries), and nonnegative multipliers for the
// dominance rows when the diagonal-dominance variant is used.
struct DualSystem {
  MatchingSystem sys;
  VarSpan lambda;
  std::vector<VarSpan> y;
  VarSpan theta;
};

struct DualModel {
  int n = 0;
  int degree = 0;
  LiftedSpace space;
  ConicProgram prog;
  DualSystem objective;
  std::vector<DualSystem> constraints;
};

// Master relaxation: minimize -sum_j lambda_j s_j over the lifted region,
// subject to per-block stationarity equalities and paired LMIs. Polynomial
// constraints rho(x) <= 0 each contribute their own matching system docked
// to the same lifted point, with their dual bound constrained nonpositive.
// extra_family appends affine-keyed blocks (redundant-row experiments).
DualModel build_best_slc_program(const Polynomial& p, const LiftedRegion& region, int d,
                                 const std::vector<Polynomial>& constraint_polys = {},
                                 const std::vector<AffineFactor>& extra_family = {});

// Degree-3 variant where block convexity is enforced through diagonal
// dominance instead of LMIs; matrix multipliers become equalities plus
// nonnegative dominance multipliers with zero-sum side conditions.
DualModel build_gershgorin_variant(const Polynomial& p, const LiftedRegion& region);

// Relaxation value of one fixed decomposition over the same region:
// min sum_b (eta_b + r_b.z_b + w_b t_b) with eta_b >= z^T Q z / t via a
// Schur epigraph on a factorization of Q.
ConicProgram build_fixed_decomposition_program(const SLCDecomposition& dec,
                                               const LiftedRegion& region);

struct ExtractedPoint {
  double lb = 0.0;
  Eigen::VectorXd x;
  Eigen::MatrixXd u;
  std::map<std::pair<int, int>, Eigen::VectorXd> v;
  double clip = 0.0;  // largest box violation removed when clamping x
};

// Throws SolveStatusError unless sol.usable().
ExtractedPoint extract_bound_and_point(const DualModel& model, const ConicSolution& sol);

}  // namespace slcpopt
