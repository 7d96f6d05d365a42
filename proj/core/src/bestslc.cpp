#include "slcpopt/bestslc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

namespace slcpopt {

namespace {

Polynomial block_factor(const MatchingSystem& ms, int b) {
  SLCDecomposition shell;
  shell.n = ms.n;
  shell.degree = ms.d;
  shell.affine_factors = ms.affine_factors;
  return shell.factor_polynomial(ms.family[b]);
}

int tri_size(int n) { return n * (n + 1) / 2; }

int tri_index(int n, int k, int l) {
  // upper triangle, row-major, k <= l
  return k * n - k * (k - 1) / 2 + (l - k);
}

// Emits the dual of max over decompositions docked at the lifted point:
// per block, a matrix multiplier squeezed between the lambda-combination
// and the Schur pairing with the linearized factor and factor*x. With
// `dominance` set, block convexity on the decomposition side is the
// diagonal-dominance polytope, so the matrix stationarity becomes an
// equality with extra nonnegative multipliers theta.
DualSystem emit_dual_system(ConicProgram& prog, const LiftedSpace& space,
                            MatchingSystem ms, bool dominance) {
  const int n = ms.n;
  const int m = ms.num_rows();
  const int nb = ms.num_blocks();

  DualSystem out;
  out.lambda = {prog.add_vars(m), m};
  out.y.reserve(nb);
  for (int b = 0; b < nb; ++b) out.y.push_back({prog.add_vars(tri_size(n)), tri_size(n)});

  // theta layout per block: for each pair k < l the rows |Q_kl| <= T_kl
  // (+ then -), followed by n dominance rows sum_{l != k} T_kl <= Q_kk.
  const int pairs = n * (n - 1) / 2;
  const int theta_per_block = 2 * pairs + n;
  if (dominance) {
    out.theta = {prog.add_vars(nb * theta_per_block), nb * theta_per_block};
    for (int t = 0; t < out.theta.count; ++t) {
      LinExpr row;
      row.add(out.theta.start + t, 1.0);
      prog.add_nonneg(row);
    }
  }

  auto pair_slot = [&](int k, int l) {
    // index of pair (k,l), k < l, in row-major upper-triangle-without-diag
    return k * (2 * n - k - 1) / 2 + (l - k - 1);
  };

  for (int b = 0; b < nb; ++b) {
    const int y0 = out.y[b].start;
    const int th0 = out.theta.start + b * theta_per_block;

    // matrix stationarity
    std::vector<LinExpr> side(tri_size(n));
    for (int k = 0; k < n; ++k) {
      for (int l = k; l < n; ++l) {
        LinExpr& e = side[tri_index(n, k, l)];
        const double sgn = dominance ? 1.0 : -1.0;
        e.add(y0 + tri_index(n, k, l), sgn);
        const int qc = ms.q_col(b, k, l);
        for (int j = 0; j < m; ++j) {
          const double a = ms.A(j, qc);
          if (a != 0.0) e.add(out.lambda.start + j, sgn * a);
        }
      }
    }
    if (!dominance) {
      prog.add_psd(n, side);  // -(Y_b + sum_j lambda_j A_j^b) PSD
    } else {
      for (int k = 0; k < n; ++k) {
        for (int l = k; l < n; ++l) {
          LinExpr& e = side[tri_index(n, k, l)];
          if (k == l) {
            // dominance row k carries coefficient -1 on Q_kk
            e.add(th0 + 2 * pairs + k, 1.0);
          } else {
            e.add(th0 + 2 * pair_slot(k, l), -0.5);
            e.add(th0 + 2 * pair_slot(k, l) + 1, 0.5);
          }
          prog.add_zero(e);
        }
      }
      // multipliers of each T_kl must cancel: the absolute-value pair
      // against the two dominance rows that sum T_kl
      for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          LinExpr zs;
          zs.add(th0 + 2 * pair_slot(k, l), -1.0);
          zs.add(th0 + 2 * pair_slot(k, l) + 1, -1.0);
          zs.add(th0 + 2 * pairs + k, 1.0);
          zs.add(th0 + 2 * pairs + l, 1.0);
          prog.add_zero(zs);
        }
      }
    }

    // vector and scalar stationarity at the lifted point
    const Polynomial f = block_factor(ms, b);
    std::vector<LinExpr> z_lin(n);
    for (int k = 0; k < n; ++k) {
      z_lin[k] = space.linearize(f * Polynomial::variable(n, k));
      LinExpr e = z_lin[k];
      const int rc = ms.r_col(b, k);
      for (int j = 0; j < m; ++j) {
        const double a = ms.A(j, rc);
        if (a != 0.0) e.add(out.lambda.start + j, a);
      }
      prog.add_zero(e);
    }
    LinExpr t_lin = space.linearize(f);
    {
      LinExpr e = t_lin;
      const int wc = ms.w_col(b);
      for (int j = 0; j < m; ++j) {
        const double a = ms.A(j, wc);
        if (a != 0.0) e.add(out.lambda.start + j, a);
      }
      prog.add_zero(e);
    }

    // Schur pairing [[Y_b, z_b], [z_b^T, t_b]] PSD
    std::vector<LinExpr> schur(tri_size(n + 1));
    for (int k = 0; k <= n; ++k) {
      for (int l = k; l <= n; ++l) {
        LinExpr& e = schur[tri_index(n + 1, k, l)];
        if (l < n) {
          e.add(y0 + tri_index(n, k, l), 1.0);
        } else if (k < n) {
          e = z_lin[k];
        } else {
          e = t_lin;
        }
      }
    }
    prog.add_psd(n + 1, schur);
  }

  out.sys = std::move(ms);
  return out;
}

void add_region_rows(ConicProgram& prog, const LiftedRegion& region) {
  for (const auto& row : region.nonneg) prog.add_nonneg(row);
}

}  // namespace

DualModel build_best_slc_program(const Polynomial& p, const LiftedRegion& region, int d,
                                 const std::vector<Polynomial>& constraint_polys,
                                 const std::vector<AffineFactor>& extra_family) {
  const int n = region.space.n();
  if (p.num_vars() != n) throw std::invalid_argument("objective dimension mismatch");

  int needed = d - 1;
  std::vector<int> cons_degree;
  for (const auto& rho : constraint_polys) {
    if (rho.num_vars() != n) throw std::invalid_argument("constraint dimension mismatch");
    int dr = std::max(3, rho.degree());
    cons_degree.push_back(dr);
    needed = std::max(needed, dr - 1);
  }
  if (region.space.max_order() < needed)
    throw std::invalid_argument("lifted region order too small for the family degree");

  DualModel model;
  model.n = n;
  model.degree = d;
  model.space = region.space;

  ConicProgram& prog = model.prog;
  prog.add_vars(region.space.total_vars());
  add_region_rows(prog, region);

  model.objective =
      emit_dual_system(prog, model.space, build_matching_system(p, d, extra_family), false);
  for (size_t k = 0; k < constraint_polys.size(); ++k) {
    DualSystem ds = emit_dual_system(
        prog, model.space, build_matching_system(constraint_polys[k], cons_degree[k]), false);
    // relaxed constraint value -sum_j lambda_j s_j must stay nonpositive
    LinExpr bound;
    for (int j = 0; j < ds.sys.num_rows(); ++j)
      if (ds.sys.s(j) != 0.0) bound.add(ds.lambda.start + j, ds.sys.s(j));
    prog.add_nonneg(bound);
    model.constraints.push_back(std::move(ds));
  }

  for (int j = 0; j < model.objective.sys.num_rows(); ++j)
    if (model.objective.sys.s(j) != 0.0)
      prog.set_objective_term(model.objective.lambda.start + j, -model.objective.sys.s(j));
  return model;
}

DualModel build_gershgorin_variant(const Polynomial& p, const LiftedRegion& region) {
  const int n = region.space.n();
  if (p.num_vars() != n) throw std::invalid_argument("objective dimension mismatch");
  if (p.degree() > 3)
    throw std::invalid_argument("diagonal-dominance variant supports degree 3 only");
  if (region.space.max_order() < 2)
    throw std::invalid_argument("lifted region order too small");

  DualModel model;
  model.n = n;
  model.degree = 3;
  model.space = region.space;

  ConicProgram& prog = model.prog;
  prog.add_vars(region.space.total_vars());
  add_region_rows(prog, region);
  model.objective =
      emit_dual_system(prog, model.space, build_matching_system(p, 3), true);

  for (int j = 0; j < model.objective.sys.num_rows(); ++j)
    if (model.objective.sys.s(j) != 0.0)
      prog.set_objective_term(model.objective.lambda.start + j, -model.objective.sys.s(j));
  return model;
}

ConicProgram build_fixed_decomposition_program(const SLCDecomposition& dec,
                                               const LiftedRegion& region) {
  if (dec.form != SlcForm::ProductQuadratic)
    throw std::invalid_argument("fixed relaxation needs product-form blocks");
  const int n = dec.n;
  if (region.space.n() != n) throw std::invalid_argument("region dimension mismatch");
  if (region.space.max_order() < dec.degree - 1)
    throw std::invalid_argument("lifted region order too small for the decomposition");

  ConicProgram prog;
  prog.add_vars(region.space.total_vars());
  for (const auto& row : region.nonneg) prog.add_nonneg(row);

  std::vector<double> obj(region.space.total_vars(), 0.0);
  double offset = 0.0;
  auto accumulate = [&](const LinExpr& e, double scale) {
    offset += scale * e.c0;
    for (const auto& [var, coef] : e.terms) obj[var] += scale * coef;
  };

  for (const auto& [key, blk] : dec.blocks) {
    const Polynomial f = dec.factor_polynomial(key);
    std::vector<LinExpr> z_lin(n);
    for (int k = 0; k < n; ++k)
      z_lin[k] = region.space.linearize(f * Polynomial::variable(n, k));
    LinExpr t_lin = region.space.linearize(f);

    for (int k = 0; k < n; ++k) accumulate(z_lin[k], blk.r(k));
    accumulate(t_lin, blk.w);
    prog.add_nonneg(t_lin);

    // eta >= z^T Q z / t through [[eta, (Lz)^T], [Lz, t I]] with Q = L^T L
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(blk.Q);
    std::vector<Eigen::VectorXd> lrows;
    for (int i = 0; i < n; ++i) {
      const double ev = eig.eigenvalues()(i);
      if (ev > 1e-12)
        lrows.push_back(std::sqrt(ev) * eig.eigenvectors().col(i).transpose());
    }
    if (lrows.empty()) continue;

    const int eta = prog.add_vars(1);
    obj.push_back(1.0);
    const int r = static_cast<int>(lrows.size());
    std::vector<LinExpr> entries(tri_size(r + 1));
    entries[tri_index(r + 1, 0, 0)].add(eta, 1.0);
    for (int i = 0; i < r; ++i) {
      LinExpr& e = entries[tri_index(r + 1, 0, i + 1)];
      for (int k = 0; k < n; ++k) {
        const double c = lrows[i](k);
        if (c == 0.0) continue;
        e.c0 += c * z_lin[k].c0;
        for (const auto& [var, coef] : z_lin[k].terms) e.add(var, c * coef);
      }
      entries[tri_index(r + 1, i + 1, i + 1)] = t_lin;
    }
    prog.add_psd(r + 1, entries);
  }

  for (int v = 0; v < static_cast<int>(obj.size()); ++v)
    if (obj[v] != 0.0) prog.set_objective_term(v, obj[v]);
  prog.set_objective_offset(offset);
  return prog;
}

ExtractedPoint extract_bound_and_point(const DualModel& model, const ConicSolution& sol) {
  if (!sol.usable())
    throw SolveStatusError(sol.status, "relaxation did not reach a usable solution");

  ExtractedPoint out;
  out.lb = sol.objective;
  const int n = model.n;
  out.x = sol.z.head(n);
  for (int i = 0; i < n; ++i) {
    const double raw = out.x(i);
    const double clamped = std::min(1.0, std::max(0.0, raw));
    out.clip = std::max(out.clip, std::abs(raw - clamped));
    out.x(i) = clamped;
  }
  out.u.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.u(i, j) = sol.z(model.space.pair_index(i, j));
  if (model.space.max_order() >= 3 && model.degree >= 4) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Eigen::VectorXd col(n);
        for (int k = 0; k < n; ++k) {
          std::vector<int> key{i, j, k};
          std::sort(key.begin(), key.end());
          col(k) = sol.z(model.space.flat_index(key));
        }
        out.v[{i, j}] = col;
      }
    }
  }
  return out;
}

}  // namespace slcpopt
