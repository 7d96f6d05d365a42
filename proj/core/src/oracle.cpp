#include "slcpopt/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace slcpopt {

namespace {

double penalty_value(const Problem& prob, const Eigen::VectorXd& x, double mu) {
  double v = prob.objective.evaluate(x);
  for (const auto& c : prob.constraints) {
    double h = c.kind == ConstraintKind::LogSumExp ? log_sum_exp(x) - c.alpha
                                                   : c.poly.evaluate(x);
    if (h > 0) v += mu * h;
  }
  return v;
}

Eigen::VectorXd penalty_gradient(const Problem& prob, const Eigen::VectorXd& x, double mu) {
  Eigen::VectorXd g = prob.objective.gradient(x);
  for (const auto& c : prob.constraints) {
    if (c.kind == ConstraintKind::LogSumExp) {
      if (log_sum_exp(x) - c.alpha > 0) {
        const double m = x.maxCoeff();
        Eigen::VectorXd e = (x.array() - m).exp();
        g += mu * (e / e.sum()).matrix();
      }
    } else if (c.poly.evaluate(x) > 0) {
      g += mu * c.poly.gradient(x);
    }
  }
  return g;
}

// Projected gradient with backtracking on objective + exact penalty.
Eigen::VectorXd project_descend(const Problem& prob, Eigen::VectorXd x, double mu,
                                int iters) {
  const double edge = (prob.box.upper - prob.box.lower).maxCoeff();
  double step = 0.25 * std::max(edge, 1e-6);
  double fx = penalty_value(prob, x, mu);
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd g = penalty_gradient(prob, x, mu);
    const double gn = g.norm();
    if (gn < 1e-13) break;
    double t = step;
    bool moved = false;
    for (int bt = 0; bt < 45; ++bt) {
      Eigen::VectorXd cand = prob.box.clamp(x - t * g);
      const double fc = penalty_value(prob, cand, mu);
      const double decrease = (x - cand).squaredNorm() / std::max(t, 1e-300);
      if (fc <= fx - 1e-4 * decrease && fc < fx) {
        step = std::min(2.0 * t, 4.0 * edge);
        x = std::move(cand);
        fx = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace

OracleResult brute_force_min(const Problem& prob, int grid_k, int starts) {
  const int n = prob.n;
  if (n > 6) throw std::invalid_argument("brute_force_min: refusing grid beyond n = 6");
  int k = grid_k > 0 ? grid_k : (n <= 4 ? 21 : 9);
  if (k < 2) k = 2;
  if (starts < 1) starts = 1;

  OracleResult out;
  out.grid_k = k;

  // best `starts` feasible grid points, worst on top
  using Cand = std::pair<double, Eigen::VectorXd>;
  auto worse = [](const Cand& a, const Cand& b) { return a.first < b.first; };
  std::priority_queue<Cand, std::vector<Cand>, decltype(worse)> top(worse);

  Eigen::VectorXd x(n);
  std::vector<int> idx(n, 0);
  const double grid_tol = 1e-6;
  while (true) {
    for (int i = 0; i < n; ++i) {
      const double f = static_cast<double>(idx[i]) / (k - 1);
      x(i) = prob.box.lower(i) + f * (prob.box.upper(i) - prob.box.lower(i));
    }
    if (prob.max_violation(x) <= grid_tol) {
      top.emplace(prob.objective.evaluate(x), x);
      if (static_cast<int>(top.size()) > starts) top.pop();
    }
    int p = 0;
    while (p < n && ++idx[p] == k) idx[p++] = 0;
    if (p == n) break;
  }

  if (top.empty()) {
    out.value = std::numeric_limits<double>::infinity();
    out.grid_value = out.value;
    out.argmin = prob.box.clamp(0.5 * (prob.box.lower + prob.box.upper));
    return out;
  }

  std::vector<Cand> cands;
  while (!top.empty()) {
    cands.push_back(top.top());
    top.pop();
  }
  out.grid_value = cands.back().first;  // heap pops worst first

  const double feas_tol = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  auto consider = [&](const Eigen::VectorXd& pt) {
    if (prob.max_violation(pt) > feas_tol) return;
    const double v = prob.objective.evaluate(pt);
    if (v < best) {
      best = v;
      best_x = pt;
    }
  };

  for (const auto& [v0, x0] : cands) {
    (void)v0;
    consider(x0);
    Eigen::VectorXd xr = project_descend(prob, x0, 1e4, 300);
    if (prob.max_violation(xr) > feas_tol) xr = project_descend(prob, xr, 1e6, 100);
    consider(xr);
  }

  if (!std::isfinite(best)) {
    out.value = cands.back().first;
    out.argmin = cands.back().second;
    out.grid_value = out.value;
    return out;
  }
  out.value = best;
  out.argmin = best_x;
  out.refined = true;
  out.feasible_found = true;
  return out;
}

std::vector<SLCDecomposition> sample_feasible_decompositions(const MatchingSystem& ms,
                                                             int count, unsigned seed) {
  const int n = ms.n;
  Polynomial p(n);
  for (int j = 0; j < ms.num_rows(); ++j)
    if (ms.s(j) != 0.0) p.add_term(ms.row_monomials[j], ms.s(j));

  const SLCDecomposition base = construct_slc(p, ms.d);
  const Eigen::VectorXd z0 = ms.vectorize(base);

  // perturbations live in the null space of the rows, restricted so the
  // quadratics of affine-keyed blocks (which the identity-shift direction
  // cannot lift) stay untouched
  std::vector<int> pinned;
  for (int b = 0; b < ms.num_blocks(); ++b) {
    if (ms.family[b].affine_id < 0) continue;
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) pinned.push_back(ms.q_col(b, k, l));
  }
  Eigen::MatrixXd aug(ms.num_rows() + static_cast<int>(pinned.size()), ms.num_cols());
  aug.topRows(ms.num_rows()) = ms.A;
  aug.bottomRows(static_cast<int>(pinned.size())).setZero();
  for (size_t r = 0; r < pinned.size(); ++r) aug(ms.num_rows() + static_cast<int>(r), pinned[r]) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(aug);
  const bool trivial = lu.dimensionOfKernel() == 0;
  const Eigen::MatrixXd kernel = lu.kernel();

  std::mt19937 rng(seed);
  auto canonical = [&rng]() {
    const double hi = static_cast<double>(rng() >> 5);
    const double lo = static_cast<double>(rng() >> 6);
    return (hi * 67108864.0 + lo) / 9007199254740992.0;  // 53-bit in [0,1)
  };

  const double scale = 0.3 * std::max(1.0, z0.cwiseAbs().maxCoeff());
  const double tiling_n = family_tiling_constant(n, ms.d);

  std::vector<SLCDecomposition> out;
  out.reserve(count);
  for (int sample = 0; sample < count; ++sample) {
    Eigen::VectorXd z = z0;
    if (sample > 0 && !trivial) {
      Eigen::VectorXd u(kernel.cols());
      for (int c = 0; c < u.size(); ++c) u(c) = 2.0 * canonical() - 1.0;
      Eigen::VectorXd delta = kernel * u;
      const double dmax = delta.cwiseAbs().maxCoeff();
      if (dmax > 0) z += (scale / dmax) * delta;
    }

    // smallest identity shift restoring convexity of every block
    double t = 0.0;
    SLCDecomposition dec = ms.devectorize(z);
    for (int b = 0; b < ms.num_blocks(); ++b) {
      const double wgt = block_split_weight(ms.family[b]);
      if (wgt <= 0) continue;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dec.blocks[b].second.Q);
      const double need = std::max(0.0, -eig.eigenvalues().minCoeff());
      t = std::max(t, need / wgt);
    }
    if (t > 0) {
      t += 1e-10;
      for (int b = 0; b < ms.num_blocks(); ++b) {
        const BlockKey& key = ms.family[b];
        const double wgt = block_split_weight(key);
        if (wgt > 0)
          for (int k = 0; k < n; ++k) z[ms.q_col(b, k, k)] += wgt * t;
        if (key.affine_id < 0 && key.ones.empty() && key.xs.size() == 1)
          z[ms.r_col(b, key.xs[0])] -= tiling_n * t;
      }
      dec = ms.devectorize(z);
    }
    dec.alpha = base.alpha + t;
    out.push_back(std::move(dec));
  }
  return out;
}

}  // namespace slcpopt
