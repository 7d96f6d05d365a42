#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

#include "slcpopt/lifting.hpp"

namespace slcpopt {

enum class ConeType { Zero, NonNeg, Psd, Exp };

struct ConeBlock {
  ConeType type;
  int dim;        // matrix dimension for Psd, triple count for Exp, row count otherwise
  int row_start;  // first scalar row of the block
  int row_count;
};

// min c.z + offset subject to affine rows lying in their cones. PSD blocks
// hold the upper triangle of a symmetric affine matrix, row-major; scalar
// rows are stored unscaled and svec weighting is applied internally.
class ConicProgram {
 public:
  int add_vars(int count);
  int num_vars() const { return num_vars_; }

  void set_objective_term(int var, double coef);
  void set_objective_offset(double off) { obj_offset_ = off; }
  double objective_offset() const { return obj_offset_; }
  const std::vector<double>& objective() const { return c_; }

  void add_zero(const LinExpr& row);
  void add_nonneg(const LinExpr& row);
  // entries: upper triangle, row-major, size k(k+1)/2 for matrix dim k
  void add_psd(int k, const std::vector<LinExpr>& entries);
  // t >= u * exp(v / u), u >= 0 (closure)
  void add_exp(const LinExpr& t, const LinExpr& u, const LinExpr& v);

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  const std::vector<LinExpr>& rows() const { return rows_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  bool has_exp() const;
  int max_psd_dim() const;

  // value of every constraint row at z (matrix entries unscaled)
  Eigen::VectorXd row_values(const Eigen::VectorXd& z) const;

 private:
  void append_block(ConeType type, int dim, const std::vector<LinExpr>& rows);

  int num_vars_ = 0;
  std::vector<double> c_;
  double obj_offset_ = 0.0;
  std::vector<LinExpr> rows_;
  std::vector<ConeBlock> blocks_;
};

enum class SolveStatus {
  Optimal,
  NearOptimal,
  Infeasible,
  Unbounded,
  IterationLimit,
};

struct SolveOptions {
  double tol = 1e-6;
  int max_iters = 100000;
  int check_every = 25;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::IterationLimit;
  Eigen::VectorXd z;
  Eigen::VectorXd s;  // row values (cone side)
  Eigen::VectorXd y;  // row duals
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;

  bool usable() const {
    return status == SolveStatus::Optimal || status == SolveStatus::NearOptimal;
  }
};

class UnsupportedConeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolveStatusError : public std::runtime_error {
 public:
  SolveStatusError(SolveStatus st, const std::string& what)
      : std::runtime_error(what), status(st) {}
  SolveStatus status;
};

// First-order operator-splitting solve of the homogeneous self-dual
// embedding; deterministic, no warm starts. Throws UnsupportedConeError on
// exponential cones (those are export-only).
ConicSolution solve(const ConicProgram& prog, const SolveOptions& opts = {});

struct ValidationReport {
  double eq_residual = 0.0;       // max |row| over Zero rows
  double cone_violation = 0.0;    // worst nonneg / PSD eigenvalue violation at z
  double dual_residual = 0.0;     // ||c - sum_r y_r a_r||_inf
  double dual_gap = 0.0;          // |c.z + b.y| / (1 + |c.z| + |b.y|)
  double reported_mismatch = 0.0; // solver-reported vs recomputed residual delta
  bool pass = false;
};

ValidationReport validate_solution(const ConicProgram& prog, const ConicSolution& sol,
                                   double tol);

}  // namespace slcpopt
