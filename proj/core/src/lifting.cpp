#include "slcpopt/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slcpopt {

void LinExpr::add(int var, double coef) {
  if (coef == 0.0) return;
  auto it = std::lower_bound(terms.begin(), terms.end(), var,
                             [](const auto& t, int v) { return t.first < v; });
  if (it != terms.end() && it->first == var) {
    it->second += coef;
    if (it->second == 0.0) terms.erase(it);
  } else {
    terms.insert(it, {var, coef});
  }
}

double LinExpr::value(const Eigen::VectorXd& vars) const {
  double v = c0;
  for (const auto& [var, c] : terms) v += c * vars[var];
  return v;
}

namespace {

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

}  // namespace

LiftedSpace::LiftedSpace(int n, int max_order) : n_(n), max_order_(max_order) {
  if (n < 1) throw std::invalid_argument("need at least one variable");
  if (max_order < 2 || max_order > 5)
    throw std::invalid_argument("lift order must be in [2, 5]");
  for (int s = 2; s <= max_order; ++s) {
    std::vector<std::vector<int>> ms;
    std::vector<int> cur;
    enumerate_multisets(n, s, 0, cur, ms);
    for (auto& key : ms) {
      index_.emplace(key, static_cast<int>(keys_.size()));
      keys_.push_back(std::move(key));
    }
  }
}

int LiftedSpace::flat_index(const std::vector<int>& key) const {
  if (key.size() == 1) return key[0];
  auto it = index_.find(key);
  if (it == index_.end() && !std::is_sorted(key.begin(), key.end())) {
    std::vector<int> sorted = key;
    std::sort(sorted.begin(), sorted.end());
    it = index_.find(sorted);
  }
  if (it == index_.end()) throw std::out_of_range("multiset not tracked by this lift");
  return n_ + it->second;
}

int LiftedSpace::pair_index(int i, int j) const {
  std::vector<int> key{std::min(i, j), std::max(i, j)};
  return flat_index(key);
}

LinExpr LiftedSpace::linearize(const Polynomial& p) const {
  LinExpr e;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> idx = exponents_to_indices(m);
    if (idx.empty())
      e.c0 += c;
    else if (static_cast<int>(idx.size()) > max_order_)
      throw std::invalid_argument("monomial order exceeds lift order");
    else
      e.add(flat_index(idx), c);
  }
  return e;
}

namespace {

Polynomial bound_factor(int n, int var, bool upper) {
  // x_var >= 0 or 1 - x_var >= 0
  Polynomial f = Polynomial::variable(n, var);
  if (!upper) return f;
  Polynomial one = Polynomial::constant(n, 1.0);
  one -= f;
  return one;
}

Polynomial affine_poly(int n, const AffineFactor& a) {
  Polynomial p = Polynomial::constant(n, a.offset);
  for (int i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0.0) continue;
    Polynomial xi = Polynomial::variable(n, i);
    xi *= a.coeffs[i];
    p += xi;
  }
  return p;
}

}  // namespace

LiftedRegion generate_lifted_region(int n, const std::vector<AffineFactor>& linear_rows,
                                    int d, int depth) {
  if (d < 3 || d > 6) throw std::invalid_argument("degree must be in [3, 6]");
  if (depth < 0) depth = d - 1;
  if (depth < 2) throw std::invalid_argument("product depth must be >= 2");
  const int order = std::max(2, d - 1);

  LiftedRegion region;
  region.space = LiftedSpace(n, order);
  const LiftedSpace& sp = region.space;

  // original bounds and linear constraints
  for (int i = 0; i < n; ++i) {
    region.nonneg.push_back(sp.linearize(bound_factor(n, i, false)));
    region.nonneg.push_back(sp.linearize(bound_factor(n, i, true)));
  }
  for (const auto& row : linear_rows) region.nonneg.push_back(sp.linearize(affine_poly(n, row)));

  // products of bound factors, order 2..depth, every sign pattern
  for (int t = 2; t <= std::min(depth, order); ++t) {
    std::vector<std::vector<int>> ms;
    std::vector<int> cur;
    enumerate_multisets(n, t, 0, cur, ms);
    for (const auto& m : ms) {
      for (int mask = 0; mask < (1 << t); ++mask) {
        Polynomial prod = Polynomial::constant(n, 1.0);
        for (int k = 0; k < t; ++k) prod = prod * bound_factor(n, m[k], (mask >> k) & 1);
        region.nonneg.push_back(sp.linearize(prod));
      }
    }
  }

  // general linear rows times single bound factors (depth 2 only)
  for (const auto& row : linear_rows) {
    Polynomial rp = affine_poly(n, row);
    for (int i = 0; i < n; ++i) {
      region.nonneg.push_back(sp.linearize(rp * bound_factor(n, i, false)));
      region.nonneg.push_back(sp.linearize(rp * bound_factor(n, i, true)));
    }
  }
  return region;
}

double LiftedPoint::moment(const std::vector<int>& key) const {
  if (key.empty()) return 1.0;
  if (key.size() == 1) return x[key[0]];
  auto it = moments.find(key);
  if (it == moments.end()) throw std::out_of_range("moment not present");
  return it->second;
}

LiftedPoint LiftedPoint::exact(const Eigen::VectorXd& x, int max_order) {
  LiftedPoint pt;
  pt.x = x;
  const int n = static_cast<int>(x.size());
  for (int s = 2; s <= max_order; ++s) {
    std::vector<std::vector<int>> ms;
    std::vector<int> cur;
    enumerate_multisets(n, s, 0, cur, ms);
    for (const auto& key : ms) {
      double v = 1.0;
      for (int i : key) v *= x[i];
      pt.moments.emplace(key, v);
    }
  }
  return pt;
}

LiftedPoint LiftedPoint::from_flat(const LiftedSpace& space, const Eigen::VectorXd& vars) {
  LiftedPoint pt;
  pt.x = vars.head(space.n());
  for (int id = 0; id < space.lifted_count(); ++id)
    pt.moments.emplace(space.key_of(id), vars[space.n() + id]);
  return pt;
}

namespace {

// t and z for one block: linearized factor and factor*x_k moments.
struct FactorMoments {
  double t;
  Eigen::VectorXd z;
};

FactorMoments factor_moments(const SLCDecomposition& dec, const BlockKey& key,
                             const LiftedPoint& pt) {
  const int n = dec.n;
  Polynomial f(n);
  {
    Polynomial base = Polynomial::constant(n, 1.0);
    for (int i : key.xs) base = base * Polynomial::variable(n, i);
    for (int j : key.ones) {
      Polynomial om = Polynomial::constant(n, 1.0);
      om -= Polynomial::variable(n, j);
      base = base * om;
    }
    if (key.affine_id >= 0) {
      const AffineFactor& a = dec.affine_factors.at(key.affine_id);
      Polynomial ap = Polynomial::constant(n, a.offset);
      for (int i = 0; i < n; ++i) {
        if (a.coeffs[i] == 0.0) continue;
        Polynomial xi = Polynomial::variable(n, i);
        xi *= a.coeffs[i];
        ap += xi;
      }
      base = base * ap;
    }
    f = base;
  }

  FactorMoments fm;
  fm.t = 0.0;
  fm.z = Eigen::VectorXd::Zero(n);
  for (const auto& [m, c] : f.terms()) {
    std::vector<int> idx = exponents_to_indices(m);
    fm.t += c * pt.moment(idx);
    for (int k = 0; k < n; ++k) {
      std::vector<int> ext = idx;
      ext.insert(std::upper_bound(ext.begin(), ext.end(), k), k);
      fm.z[k] += c * pt.moment(ext);
    }
  }
  return fm;
}

}  // namespace

double evaluate_g(const SLCDecomposition& dec, const LiftedPoint& pt) {
  if (dec.form != SlcForm::ProductQuadratic)
    throw std::invalid_argument("perspective evaluation needs quadratic blocks");
  constexpr double kTinyT = 1e-11;
  double total = 0.0;
  for (const auto& [key, blk] : dec.blocks) {
    FactorMoments fm = factor_moments(dec, key, pt);
    double t = fm.t;
    double quad = fm.z.dot(blk.Q * fm.z);
    if (t > kTinyT) {
      total += quad / t;
    } else {
      double scale = 1.0 + blk.Q.cwiseAbs().maxCoeff() * fm.z.squaredNorm();
      if (std::abs(quad) > 1e-9 * scale) return std::numeric_limits<double>::infinity();
    }
    total += blk.r.dot(fm.z) + blk.w * std::max(t, 0.0);
  }
  return total;
}

double evaluate_g3(const SLCDecomposition& dec, const Eigen::VectorXd& x,
                   const Eigen::MatrixXd& U) {
  const int n = dec.n;
  if (x.size() != n || U.rows() != n || U.cols() != n)
    throw std::invalid_argument("lifted point dimension mismatch");
  LiftedPoint pt;
  pt.x = x;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pt.moments.emplace(std::vector<int>{i, j}, U(i, j));
  return evaluate_g(dec, pt);
}

double evaluate_g4(const SLCDecomposition& dec, const Eigen::VectorXd& x,
                   const Eigen::MatrixXd& U,
                   const std::map<std::pair<int, int>, Eigen::VectorXd>& V) {
  const int n = dec.n;
  LiftedPoint pt;
  pt.x = x;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pt.moments.emplace(std::vector<int>{i, j}, U(i, j));
  // order-3 moments read off the canonical v_{ab}[c] slot
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        auto it = V.find({i, j});
        if (it == V.end()) throw std::invalid_argument("missing v block");
        pt.moments.emplace(std::vector<int>{i, j, k}, it->second[k]);
      }
  return evaluate_g(dec, pt);
}

}  // namespace slcpopt
