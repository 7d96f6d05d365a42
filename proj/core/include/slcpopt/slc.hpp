#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "slcpopt/polynomial.hpp"

namespace slcpopt {

// An extra affine multiplier offset + coeffs.x used when a decomposition
// family is enlarged with a block keyed by a (redundant) linear constraint.
struct AffineFactor {
  double offset = 0.0;
  Eigen::VectorXd coeffs;

  double value(const Eigen::VectorXd& x) const { return offset + coeffs.dot(x); }
};

// Key of one family block: the product of x_i over `xs`, (1-x_j) over `ones`
// (both sorted index multisets, repeats allowed), and optionally one affine
// factor referenced by id.
struct BlockKey {
  std::vector<int> xs;
  std::vector<int> ones;
  int affine_id = -1;

  int size() const { return static_cast<int>(xs.size() + ones.size()); }
  bool operator==(const BlockKey& o) const = default;
};

bool block_key_less(const BlockKey& a, const BlockKey& b);

// Number of ways this (xs, ones) split is drawn from its combined multiset:
// prod_v C(xs_v + ones_v, xs_v). Affine-keyed blocks have weight 0.
double block_split_weight(const BlockKey& key);

// x^T Q x + r.x + w (+ higher, used only by the first-type form).
struct ConvexBlock {
  Eigen::MatrixXd Q;
  Eigen::VectorXd r;
  double w = 0.0;
  Polynomial higher;

  explicit ConvexBlock(int n)
      : Q(Eigen::MatrixXd::Zero(n, n)), r(Eigen::VectorXd::Zero(n)), w(0.0), higher(n) {}

  bool has_higher() const { return !higher.is_zero(); }
  double value(const Eigen::VectorXd& x) const;
  Polynomial as_polynomial() const;
  // Convexity check: eigenvalue bound for pure quadratics, conservative
  // coefficient-sum Hessian dominance for blocks with higher-degree terms.
  bool is_convex(double tol = 1e-9) const;
};

enum class SlcForm { ProductQuadratic, FirstType };

struct SLCDecomposition {
  int n = 0;
  int degree = 0;
  double alpha = 0.0;
  SlcForm form = SlcForm::ProductQuadratic;
  std::vector<AffineFactor> affine_factors;
  std::vector<std::pair<BlockKey, ConvexBlock>> blocks;

  Polynomial factor_polynomial(const BlockKey& key) const;
  Polynomial reconstruct() const;
  double evaluate(const Eigen::VectorXd& x) const;
  bool all_blocks_convex(double tol = 1e-9) const;
  const ConvexBlock* find(const BlockKey& key) const;
};

// Row-dominance deficit max_k (sum_{j != k} |Q_kj| - Q_kk); negative when
// strictly dominant.
double gershgorin_defect(const Eigen::MatrixXd& Q);
// max(0, defect): the smallest t >= 0 with Q + t*I diagonally dominant.
double gershgorin_alpha(const Eigen::MatrixXd& Q);

// All block keys with |xs| + |ones| <= d - 2, deterministic order.
std::vector<BlockKey> enumerate_family(int n, int d);

// sum_{s=0}^{d-2} #(multisets of size s over n variables): the constant that
// the convexification shifts add up to across the whole family.
double family_tiling_constant(int n, int d);

// Product-of-variables decomposition for 3 <= d <= 6; exact reconstruction,
// all blocks convex, alpha minimal over the family.
SLCDecomposition construct_slc(const Polynomial& p, int d);
SLCDecomposition construct_slc_degree3(const Polynomial& p);
SLCDecomposition construct_slc_degree4(const Polynomial& p);

// x_i / (1 - x_i) form with degree-(d-1) blocks, convexified through the
// absolute-coefficient Hessian bound.
SLCDecomposition construct_slc_first_type(const Polynomial& p);

// Hessian-dominance deficit of an arbitrary-degree block via absolute
// coefficient sums (exact for quadratics up to the factor 2 on the Hessian).
double hessian_dominance_deficit(const Polynomial& g);

}  // namespace slcpopt
