#include "slcpopt/slc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slcpopt {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return std::round(v);
}

double multiset_count(int n, int s) { return binom(n + s - 1, s); }

void enumerate_multisets(int n, int size, int start, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == size) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    enumerate_multisets(n, size, i, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> multisets(int n, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_multisets(n, size, 0, cur, out);
  return out;
}

}  // namespace

bool block_key_less(const BlockKey& a, const BlockKey& b) {
  bool aff_a = a.affine_id >= 0, aff_b = b.affine_id >= 0;
  if (aff_a != aff_b) return !aff_a;  // standard blocks first
  if (aff_a) {
    if (a.affine_id != b.affine_id) return a.affine_id < b.affine_id;
  }
  if (a.size() != b.size()) return a.size() > b.size();  // largest products first
  if (a.xs.size() != b.xs.size()) return a.xs.size() > b.xs.size();
  if (a.xs != b.xs) return a.xs < b.xs;
  return a.ones < b.ones;
}

double block_split_weight(const BlockKey& key) {
  if (key.affine_id >= 0) return 0.0;
  double w = 1.0;
  std::vector<int> vars = key.xs;
  vars.insert(vars.end(), key.ones.begin(), key.ones.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  for (int v : vars) {
    int a = static_cast<int>(std::count(key.xs.begin(), key.xs.end(), v));
    int b = static_cast<int>(std::count(key.ones.begin(), key.ones.end(), v));
    w *= binom(a + b, a);
  }
  return w;
}

double ConvexBlock::value(const Eigen::VectorXd& x) const {
  double v = x.dot(Q * x) + r.dot(x) + w;
  if (has_higher()) v += higher.evaluate(x);
  return v;
}

Polynomial ConvexBlock::as_polynomial() const {
  int n = static_cast<int>(r.size());
  Polynomial p(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (Q(i, j) == 0.0) continue;
      Monomial m(n, 0);
      ++m[i];
      ++m[j];
      p.add_term(m, Q(i, j));
    }
    if (r[i] != 0.0) {
      Monomial m(n, 0);
      m[i] = 1;
      p.add_term(m, r[i]);
    }
  }
  p.add_term(Monomial(n, 0), w);
  if (has_higher()) p += higher;
  return p;
}

bool ConvexBlock::is_convex(double tol) const {
  if (!has_higher()) {
    Eigen::MatrixXd S = 0.5 * (Q + Q.transpose());
    if (S.rows() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }
  return hessian_dominance_deficit(as_polynomial()) <= tol;
}

Polynomial SLCDecomposition::factor_polynomial(const BlockKey& key) const {
  Polynomial f = Polynomial::constant(n, 1.0);
  for (int i : key.xs) f = f * Polynomial::variable(n, i);
  for (int j : key.ones) {
    Polynomial one_minus = Polynomial::constant(n, 1.0);
    one_minus -= Polynomial::variable(n, j);
    f = f * one_minus;
  }
  if (key.affine_id >= 0) {
    const AffineFactor& af = affine_factors.at(key.affine_id);
    Polynomial a = Polynomial::constant(n, af.offset);
    for (int i = 0; i < n; ++i) {
      if (af.coeffs[i] == 0.0) continue;
      Polynomial xi = Polynomial::variable(n, i);
      xi *= af.coeffs[i];
      a += xi;
    }
    f = f * a;
  }
  return f;
}

Polynomial SLCDecomposition::reconstruct() const {
  Polynomial p(n);
  for (const auto& [key, block] : blocks)
    p += factor_polynomial(key) * block.as_polynomial();
  return p;
}

double SLCDecomposition::evaluate(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& [key, block] : blocks) {
    double f = 1.0;
    for (int i : key.xs) f *= x[i];
    for (int j : key.ones) f *= 1.0 - x[j];
    if (key.affine_id >= 0) f *= affine_factors.at(key.affine_id).value(x);
    v += f * block.value(x);
  }
  return v;
}

bool SLCDecomposition::all_blocks_convex(double tol) const {
  for (const auto& [key, block] : blocks)
    if (!block.is_convex(tol)) return false;
  return true;
}

const ConvexBlock* SLCDecomposition::find(const BlockKey& key) const {
  for (const auto& [k, b] : blocks)
    if (k == key) return &b;
  return nullptr;
}

double gershgorin_defect(const Eigen::MatrixXd& Q) {
  if (Q.rows() == 0) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < Q.rows(); ++k) {
    double off = 0.0;
    for (int j = 0; j < Q.cols(); ++j)
      if (j != k) off += std::abs(Q(k, j));
    worst = std::max(worst, off - Q(k, k));
  }
  return worst;
}

double gershgorin_alpha(const Eigen::MatrixXd& Q) {
  return std::max(0.0, gershgorin_defect(Q));
}

std::vector<BlockKey> enumerate_family(int n, int d) {
  if (n < 1) throw std::invalid_argument("need at least one variable");
  if (d < 3 || d > 6) throw std::invalid_argument("family degree must be in [3, 6]");
  std::vector<BlockKey> keys;
  for (int s = d - 2; s >= 0; --s) {
    for (int a = s; a >= 0; --a) {  // |xs| = a, |ones| = s - a
      for (const auto& xs : multisets(n, a)) {
        for (const auto& ones : multisets(n, s - a)) {
          keys.push_back(BlockKey{xs, ones, -1});
        }
      }
    }
  }
  return keys;
}

double family_tiling_constant(int n, int d) {
  double total = 0.0;
  for (int s = 0; s <= d - 2; ++s) total += multiset_count(n, s);
  return total;
}

namespace {

struct BlockTable {
  int n;
  std::vector<std::pair<BlockKey, ConvexBlock>> blocks;

  ConvexBlock& at(const BlockKey& key) {
    for (auto& [k, b] : blocks)
      if (k == key) return b;
    throw std::logic_error("block key missing from family");
  }
};

BlockTable make_table(int n, int d) {
  BlockTable t{n, {}};
  for (const auto& key : enumerate_family(n, d)) t.blocks.emplace_back(key, ConvexBlock(n));
  return t;
}

// A degree-k monomial lands in the block keyed by its first k-2 sorted
// indices; the trailing pair goes to the quadratic, a trailing single to the
// linear slot, and scalars stay put.
void place_monomials(const Polynomial& p, BlockTable& table) {
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> idx = exponents_to_indices(m);
    int k = static_cast<int>(idx.size());
    if (k == 0) {
      table.at(BlockKey{{}, {}, -1}).w += c;
    } else if (k == 1) {
      table.at(BlockKey{{idx[0]}, {}, -1}).w += c;
    } else if (k == 2) {
      table.at(BlockKey{{idx[0]}, {}, -1}).r[idx[1]] += c;
    } else {
      std::vector<int> xs(idx.begin(), idx.end() - 2);
      int a = idx[k - 2], b = idx[k - 1];
      ConvexBlock& blk = table.at(BlockKey{xs, {}, -1});
      if (a == b)
        blk.Q(a, a) += c;
      else {
        blk.Q(a, b) += 0.5 * c;
        blk.Q(b, a) += 0.5 * c;
      }
    }
  }
}

}  // namespace

SLCDecomposition construct_slc(const Polynomial& p, int d) {
  const int n = p.num_vars();
  if (n < 1) throw std::invalid_argument("need at least one variable");
  if (d < 3 || d > 6) throw std::invalid_argument("decomposition degree must be in [3, 6]");
  if (p.degree() > d) throw std::invalid_argument("polynomial degree exceeds requested family degree");

  BlockTable table = make_table(n, d);
  place_monomials(p, table);

  double alpha = 0.0;
  for (const auto& [key, blk] : table.blocks)
    alpha = std::max(alpha, gershgorin_defect(blk.Q));
  alpha = std::max(alpha, 0.0);

  if (alpha > 0.0) {
    const double total = family_tiling_constant(n, d);
    for (auto& [key, blk] : table.blocks) {
      double w = block_split_weight(key);
      blk.Q.diagonal().array() += w * alpha;
    }
    for (int i = 0; i < n; ++i)
      table.at(BlockKey{{i}, {}, -1}).r[i] -= total * alpha;
  }

  SLCDecomposition dec;
  dec.n = n;
  dec.degree = d;
  dec.alpha = alpha;
  dec.form = SlcForm::ProductQuadratic;
  dec.blocks = std::move(table.blocks);
  return dec;
}

SLCDecomposition construct_slc_degree3(const Polynomial& p) {
  if (p.degree() > 3) throw std::invalid_argument("degree-3 construction needs degree <= 3");
  return construct_slc(p, 3);
}

SLCDecomposition construct_slc_degree4(const Polynomial& p) {
  if (p.degree() > 4) throw std::invalid_argument("degree-4 construction needs degree <= 4");
  return construct_slc(p, 4);
}

double hessian_dominance_deficit(const Polynomial& g) {
  const int n = g.num_vars();
  // Entry polynomials of the Hessian, bounded over [0,1]^n through
  // coefficient magnitudes: |H_ij(x)| <= sum |coef|, and
  // H_ii(x) >= const(H_ii) - sum |non-const coef|.
  std::vector<std::vector<Polynomial>> H(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (const auto& [m, c] : g.terms()) {
    for (int i = 0; i < n; ++i) {
      if (m[i] == 0) continue;
      for (int j = i; j < n; ++j) {
        Monomial d = m;
        double factor = c * d[i];
        --d[i];
        if (d[j] == 0) continue;
        factor *= d[j];
        --d[j];
        if (factor == 0.0) continue;
        H[i][j].add_term(d, factor);
        if (j != i) H[j][i].add_term(d, factor);
      }
    }
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += H[i][j].l1_norm();
    const Monomial zero(n, 0);
    double c0 = H[i][i].coefficient(zero);
    double lower = c0 - (H[i][i].l1_norm() - std::abs(c0));
    worst = std::max(worst, off - lower);
  }
  return worst;
}

SLCDecomposition construct_slc_first_type(const Polynomial& p) {
  const int n = p.num_vars();
  if (n < 1) throw std::invalid_argument("need at least one variable");
  const int d = std::max(3, p.degree());
  if (d > 6) throw std::invalid_argument("degree cap is 6");

  SLCDecomposition dec;
  dec.n = n;
  dec.degree = d;
  dec.form = SlcForm::FirstType;
  for (int i = 0; i < n; ++i) dec.blocks.emplace_back(BlockKey{{i}, {}, -1}, ConvexBlock(n));
  for (int i = 0; i < n; ++i) dec.blocks.emplace_back(BlockKey{{}, {i}, -1}, ConvexBlock(n));
  auto& px = dec.blocks;
  auto block_of = [&px](const BlockKey& key) -> ConvexBlock& {
    for (auto& [k, b] : px)
      if (k == key) return b;
    throw std::logic_error("missing block");
  };

  for (const auto& [m, c] : p.terms()) {
    std::vector<int> idx = exponents_to_indices(m);
    if (idx.empty()) {
      // constants split across x_1 and 1 - x_1
      block_of(BlockKey{{0}, {}, -1}).w += c;
      block_of(BlockKey{{}, {0}, -1}).w += c;
      continue;
    }
    int lead = idx.front();
    std::vector<int> rest(idx.begin() + 1, idx.end());
    ConvexBlock& blk = block_of(BlockKey{{lead}, {}, -1});
    int k = static_cast<int>(rest.size());
    if (k == 0) {
      blk.w += c;
    } else if (k == 1) {
      blk.r[rest[0]] += c;
    } else if (k == 2) {
      int a = rest[0], b = rest[1];
      if (a == b)
        blk.Q(a, a) += c;
      else {
        blk.Q(a, b) += 0.5 * c;
        blk.Q(b, a) += 0.5 * c;
      }
    } else {
      blk.higher.add_term(indices_to_exponents(n, rest), c);
    }
  }

  double alpha = 0.0;
  for (const auto& [key, blk] : dec.blocks)
    alpha = std::max(alpha, hessian_dominance_deficit(blk.as_polynomial()));
  alpha = std::max(alpha, 0.0);
  dec.alpha = alpha;

  if (alpha > 0.0) {
    for (auto& [key, blk] : dec.blocks) blk.Q.diagonal().array() += alpha;
    for (int i = 0; i < n; ++i) block_of(BlockKey{{i}, {}, -1}).r[i] -= n * alpha;
  }
  return dec;
}

}  // namespace slcpopt
