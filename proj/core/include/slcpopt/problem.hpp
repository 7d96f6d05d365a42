#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "slcpopt/polynomial.hpp"
#include "slcpopt/slc.hpp"

namespace slcpopt {

enum class ConstraintKind { Linear, PolynomialIneq, LogSumExp };

// Linear / PolynomialIneq mean poly(x) <= 0; LogSumExp means
// log(sum_i exp(x_i)) <= alpha.
struct Constraint {
  ConstraintKind kind = ConstraintKind::Linear;
  Polynomial poly;
  double alpha = 0.0;

  Constraint() : poly(0) {}
};

struct Problem {
  int n = 0;
  Box box;
  Polynomial objective;
  std::vector<Constraint> constraints;

  Problem() : objective(0) {}

  int max_degree() const;  // over objective and polynomial constraints
  bool has_log_sum_exp() const;
  // worst constraint violation at x (box excluded)
  double max_violation(const Eigen::VectorXd& x) const;
};

inline constexpr int kMaxDegree = 6;

// JSON schema:
//   { "n": 2, "bounds": [[0,1],[0,1]],
//     "objective": [{"exps": [3,0], "coef": 1.0}, ...],
//     "constraints": [
//        {"kind": "linear",      "terms": [...]},
//        {"kind": "polynomial",  "terms": [...]},
//        {"kind": "log_sum_exp", "alpha": 1.5} ] }
// Errors name the offending field / term index.
Problem parse_problem(const std::string& text);
std::string problem_to_json(const Problem& prob);

// View of the problem pulled back onto [0,1]^n. Objective values are
// preserved (no rescaling), so bounds transfer directly; points map back
// through the box.
struct NormalizedProblem {
  Problem unit;
  Box original;

  Eigen::VectorXd to_original(const Eigen::VectorXd& y) const;
  Eigen::VectorXd to_unit(const Eigen::VectorXd& x) const;
};

NormalizedProblem normalize_to_unit(const Problem& prob);

// Linear constraints of a unit-box problem as offset + c.x >= 0 rows
// (inputs to region generation); polynomial constraints as <= 0 polys.
std::vector<AffineFactor> linear_rows(const Problem& unit_problem);
std::vector<Polynomial> polynomial_rows(const Problem& unit_problem);

double log_sum_exp(const Eigen::VectorXd& x);

}  // namespace slcpopt
