#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slcpopt/polynomial.hpp"
#include "slcpopt/slc.hpp"

namespace slcpopt {

// Linear system tying block coefficients to the coefficients of p: one
// equality row per monomial of degree <= d (zero-coefficient monomials
// included). Unknown layout per block: q_kl (k <= l, monomial convention,
// so q_kl is the coefficient of x_k x_l), then r_k, then w.
struct MatchingSystem {
  int n = 0;
  int d = 0;
  std::vector<BlockKey> family;
  std::vector<AffineFactor> affine_factors;
  std::vector<Monomial> row_monomials;
  Eigen::MatrixXd A;
  Eigen::VectorXd s;

  int cols_per_block() const { return n * (n + 1) / 2 + n + 1; }
  int num_blocks() const { return static_cast<int>(family.size()); }
  int num_rows() const { return static_cast<int>(row_monomials.size()); }
  int num_cols() const { return num_blocks() * cols_per_block(); }

  int q_col(int block, int k, int l) const;  // k <= l
  int r_col(int block, int k) const;
  int w_col(int block) const;

  // Matrix view of row j's coefficients on block b's quadratic, built so
  // that <row_matrix, Q> (Frobenius) equals the row's contribution for any
  // symmetric Q with monomial coefficients q_kk = Q_kk, q_kl = 2 Q_kl.
  Eigen::MatrixXd row_matrix(int j, int block) const;
  Eigen::VectorXd row_vector(int j, int block) const;
  double row_scalar(int j, int block) const;

  Eigen::VectorXd vectorize(const SLCDecomposition& dec) const;
  SLCDecomposition devectorize(const Eigen::VectorXd& z) const;

  double max_row_residual(const Eigen::VectorXd& z) const;
};

MatchingSystem build_matching_system(const Polynomial& p, int d,
                                     const std::vector<AffineFactor>& extra = {});

}  // namespace slcpopt
