#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "slcpopt/polynomial.hpp"
#include "slcpopt/slc.hpp"

namespace slcpopt {

// Affine expression over the flat variable space [x_0..x_{n-1}, lifted...].
struct LinExpr {
  double c0 = 0.0;
  std::vector<std::pair<int, double>> terms;  // sorted by variable id

  void add(int var, double coef);
  double value(const Eigen::VectorXd& vars) const;
};

// One scalar variable per sorted index multiset of size 2..max_order; size-1
// multisets alias the original variables. Moments of the same multiset are
// identified regardless of how a product was formed.
class LiftedSpace {
 public:
  LiftedSpace() = default;
  LiftedSpace(int n, int max_order);

  int n() const { return n_; }
  int max_order() const { return max_order_; }
  int lifted_count() const { return static_cast<int>(keys_.size()); }
  int total_vars() const { return n_ + lifted_count(); }

  // Flat variable id of a multiset (size 1 -> the variable itself).
  int flat_index(const std::vector<int>& key) const;
  const std::vector<int>& key_of(int lifted_id) const { return keys_.at(lifted_id); }

  // Multiset of the pair (i, j) -> flat id of u_ij.
  int pair_index(int i, int j) const;

  LinExpr linearize(const Polynomial& p) const;

 private:
  int n_ = 0;
  int max_order_ = 0;
  std::vector<std::vector<int>> keys_;
  std::map<std::vector<int>, int> index_;
};

// Linear outer approximation of the lifted feasible set: nonneg rows from
// bound/constraint products plus the original linear constraints.
struct LiftedRegion {
  LiftedSpace space;
  std::vector<LinExpr> nonneg;  // each row >= 0
};

// linear_rows are the problem's general linear constraints in offset+c.x >= 0
// form. depth < 0 picks the default: products of bound factors up to order
// d-1 plus depth-2 products of the general rows with single bounds.
LiftedRegion generate_lifted_region(int n, const std::vector<AffineFactor>& linear_rows,
                                    int d, int depth = -1);

// A point in the lifted space, with every moment up to max_order.
struct LiftedPoint {
  Eigen::VectorXd x;
  std::map<std::vector<int>, double> moments;

  double moment(const std::vector<int>& key) const;
  static LiftedPoint exact(const Eigen::VectorXd& x, int max_order);
  static LiftedPoint from_flat(const LiftedSpace& space, const Eigen::VectorXd& vars);
};

// Perspective-form value of a decomposition at a lifted point:
// sum_b [ z_b^T Q_b z_b / t_b + r_b . z_b + w_b t_b ] with t_b, z_b the
// linearized factor and factor*x. Convention at t_b = 0: the quadratic piece
// is 0 when z_b^T Q_b z_b vanishes and +inf otherwise.
double evaluate_g(const SLCDecomposition& dec, const LiftedPoint& pt);

double evaluate_g3(const SLCDecomposition& dec, const Eigen::VectorXd& x,
                   const Eigen::MatrixXd& U);
double evaluate_g4(const SLCDecomposition& dec, const Eigen::VectorXd& x,
                   const Eigen::MatrixXd& U,
                   const std::map<std::pair<int, int>, Eigen::VectorXd>& V);

}  // namespace slcpopt
