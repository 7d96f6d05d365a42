#include <algorithm>
#include <cmath>

#include "slcpopt/conic.hpp"

// Operator-splitting solve of the homogeneous self-dual embedding. One fixed
// factorization of (I + A^T A), Ruiz-equilibrated data, over-relaxed
// Douglas-Rachford iterations, eigenvalue-clamp projection for PSD blocks.

namespace slcpopt {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct ScaledData {
  Eigen::SparseMatrix<double> A;  // m x n, standard form A z + s = b
  Eigen::VectorXd b, c;
  Eigen::VectorXd row_scale;  // E
  Eigen::VectorXd col_scale;  // D
  Eigen::VectorXd svec_w;     // per-row svec weight (sqrt2 on PSD off-diagonals)
  double sb = 1.0, sc = 1.0;
};

// svec layout per PSD block: upper triangle row-major, off-diag * sqrt(2)
ScaledData assemble(const ConicProgram& prog) {
  const int n = prog.num_vars();
  const int m = prog.num_rows();
  ScaledData d;
  d.b.resize(m);
  d.c.resize(n);
  d.svec_w = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < n; ++i) d.c[i] = prog.objective()[i];

  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& blk : prog.blocks()) {
    int idx = blk.row_start;
    if (blk.type == ConeType::Psd) {
      for (int i = 0; i < blk.dim; ++i)
        for (int j = i; j < blk.dim; ++j, ++idx) {
          double w = (i == j) ? 1.0 : kSqrt2;
          const LinExpr& row = prog.rows()[idx];
          d.svec_w[idx] = w;
          d.b[idx] = w * row.c0;
          for (const auto& [var, coef] : row.terms) trips.emplace_back(idx, var, -w * coef);
        }
    } else {
      for (int r = 0; r < blk.row_count; ++r, ++idx) {
        const LinExpr& row = prog.rows()[idx];
        d.b[idx] = row.c0;
        for (const auto& [var, coef] : row.terms) trips.emplace_back(idx, var, -coef);
      }
    }
  }
  d.A.resize(m, n);
  d.A.setFromTriplets(trips.begin(), trips.end());
  return d;
}

void equilibrate(const ConicProgram& prog, ScaledData& d) {
  const int n = d.A.cols();
  const int m = d.A.rows();
  d.row_scale = Eigen::VectorXd::Ones(m);
  d.col_scale = Eigen::VectorXd::Ones(n);
  if (m == 0 || n == 0) return;

  Eigen::MatrixXd W = Eigen::MatrixXd(d.A);  // dense work copy; desk-scale data
  for (int pass = 0; pass < 10; ++pass) {
    Eigen::VectorXd rnorm = W.cwiseAbs().rowwise().maxCoeff();
    // uniform scale inside each cone block so the cone geometry is preserved
    for (const auto& blk : prog.blocks()) {
      double mx = 0.0;
      for (int r = 0; r < blk.row_count; ++r)
        mx = std::max(mx, rnorm[blk.row_start + r]);
      for (int r = 0; r < blk.row_count; ++r) rnorm[blk.row_start + r] = mx;
    }
    Eigen::VectorXd cnorm = W.cwiseAbs().colwise().maxCoeff();
    for (int i = 0; i < m; ++i) {
      double s = rnorm[i] > 1e-12 ? 1.0 / std::sqrt(rnorm[i]) : 1.0;
      W.row(i) *= s;
      d.row_scale[i] *= s;
    }
    for (int j = 0; j < n; ++j) {
      double s = cnorm[j] > 1e-12 ? 1.0 / std::sqrt(cnorm[j]) : 1.0;
      W.col(j) *= s;
      d.col_scale[j] *= s;
    }
  }
  d.A = W.sparseView(1e-300, 1.0);

  Eigen::VectorXd bs = d.row_scale.cwiseProduct(d.b);
  Eigen::VectorXd cs = d.col_scale.cwiseProduct(d.c);
  d.sb = 1.0 / std::max(1e-6, bs.norm() / std::sqrt(double(std::max(m, 1))));
  d.sc = 1.0 / std::max(1e-6, cs.norm() / std::sqrt(double(std::max(n, 1))));
  d.b = bs * d.sb;
  d.c = cs * d.sc;
}

struct ConeProjector {
  const ConicProgram& prog;
  mutable Eigen::MatrixXd scratch;

  // project y-part onto the dual cone: Zero rows free, NonNeg clamped,
  // PSD blocks eigenvalue-clamped (self-dual)
  void project_dual(Eigen::VectorXd& y) const {
    for (const auto& blk : prog.blocks()) {
      switch (blk.type) {
        case ConeType::Zero:
          break;  // dual of {0} is free
        case ConeType::NonNeg:
          for (int r = 0; r < blk.row_count; ++r) {
            double& v = y[blk.row_start + r];
            if (v < 0.0) v = 0.0;
          }
          break;
        case ConeType::Psd: {
          const int k = blk.dim;
          Eigen::MatrixXd M(k, k);
          int idx = blk.row_start;
          for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j, ++idx) {
              double v = (i == j) ? y[idx] : y[idx] / kSqrt2;
              M(i, j) = v;
              M(j, i) = v;
            }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
          Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
          M.noalias() = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
          idx = blk.row_start;
          for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j, ++idx) y[idx] = (i == j) ? M(i, j) : M(i, j) * kSqrt2;
          break;
        }
        case ConeType::Exp:
          throw UnsupportedConeError(
              "exponential cones are export-only; use the cbf export path");
      }
    }
  }
};

}  // namespace

ConicSolution solve(const ConicProgram& prog, const SolveOptions& opts) {
  if (prog.has_exp())
    throw UnsupportedConeError("exponential cones are export-only; use the cbf export path");

  const int n = prog.num_vars();
  const int m = prog.num_rows();

  ConicSolution sol;
  if (n == 0) {
    sol.status = SolveStatus::Optimal;
    sol.z = Eigen::VectorXd::Zero(0);
    sol.s = Eigen::VectorXd::Zero(m);
    sol.y = Eigen::VectorXd::Zero(m);
    sol.objective = prog.objective_offset();
    return sol;
  }

  ScaledData d = assemble(prog);
  equilibrate(prog, d);

  // cached solve with M = [[I, A^T], [-A, I]] via (I + A^T A)
  Eigen::MatrixXd AtA = Eigen::MatrixXd::Identity(n, n);
  AtA += Eigen::MatrixXd(Eigen::SparseMatrix<double>(d.A.transpose() * d.A));
  Eigen::LLT<Eigen::MatrixXd> llt(AtA);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("factorization of the splitting system failed");

  auto msolve = [&](const Eigen::VectorXd& hz, const Eigen::VectorXd& hy,
                    Eigen::VectorXd& oz, Eigen::VectorXd& oy) {
    oz = llt.solve(hz - d.A.transpose() * hy);
    oy = hy + d.A * oz;
  };

  Eigen::VectorXd p2z(n), p2y(m);
  msolve(d.c, d.b, p2z, p2y);
  const double gtp2 = d.c.dot(p2z) + d.b.dot(p2y);

  Eigen::VectorXd uz = Eigen::VectorXd::Zero(n), uy = Eigen::VectorXd::Zero(m);
  double ut = 1.0;
  Eigen::VectorXd vz = Eigen::VectorXd::Zero(n), vy = Eigen::VectorXd::Zero(m);
  double vt = 1.0;

  ConeProjector projector{prog, {}};
  const double relax = 1.5;

  Eigen::VectorXd tz(n), ty(m), wz(n), wy(m);
  auto current_candidate = [&](ConicSolution& cand) -> bool {
    double tau = ut;
    if (tau <= 1e-12) return false;
    cand.z = d.col_scale.cwiseProduct(uz) / (d.sb * tau);
    // uy lives in svec coordinates; program-level duals pair with raw row
    // coefficients, so off-diagonal entries pick up the sqrt2 weight again
    // (y_r = 2 Y_ij for i != j).
    cand.y = d.svec_w.cwiseProduct(d.row_scale.cwiseProduct(uy)) / (d.sc * tau);
    // cone-side values recomputed from z; vy holds the scaled slack
    cand.s = prog.row_values(cand.z);
    return true;
  };

  int iter = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  ConicSolution best;
  for (iter = 1; iter <= opts.max_iters; ++iter) {
    // tilde u = (I+Q)^{-1} (u + v)
    wz = uz + vz;
    wy = uy + vy;
    double wt = ut + vt;
    msolve(wz, wy, tz, ty);
    double ttau = (wt + d.c.dot(tz) + d.b.dot(ty)) / (1.0 + gtp2);
    tz -= ttau * p2z;
    ty -= ttau * p2y;

    // over-relaxation
    tz = relax * tz + (1.0 - relax) * uz;
    ty = relax * ty + (1.0 - relax) * uy;
    ttau = relax * ttau + (1.0 - relax) * ut;

    // u = proj_C(tilde u - v)
    uz = tz - vz;
    uy = ty - vy;
    projector.project_dual(uy);
    ut = std::max(ttau - vt, 0.0);

    // v = v - tilde u + u
    vz += uz - tz;
    vy += uy - ty;
    vt += ut - ttau;

    if (iter % opts.check_every != 0 && iter != opts.max_iters) continue;

    ConicSolution cand;
    if (current_candidate(cand)) {
      ValidationReport rep = validate_solution(prog, cand, opts.tol);
      double pres = std::max(rep.eq_residual, rep.cone_violation);
      cand.primal_residual = pres;
      cand.dual_residual = rep.dual_residual;
      cand.gap = rep.dual_gap;
      cand.iterations = iter;
      double cz = 0.0;
      for (int i = 0; i < n; ++i) cz += prog.objective()[i] * cand.z[i];
      cand.objective = cz + prog.objective_offset();
      if (best.z.size() == 0 ||
          std::max({cand.primal_residual, cand.dual_residual, cand.gap}) <
              std::max({best.primal_residual, best.dual_residual, best.gap}))
        best = cand;
      if (pres <= opts.tol && rep.dual_residual <= opts.tol && rep.dual_gap <= opts.tol) {
        status = SolveStatus::Optimal;
        break;
      }
    }
    {
      // certificate scan: A^T y ~ 0 with b.y < 0 flags an infeasible primal,
      // Az + s ~ 0 with c.z < 0 an unbounded one
      double bty = d.b.dot(uy);
      double ctx = d.c.dot(uz);
      if (bty < -1e-12) {
        Eigen::VectorXd aty = d.A.transpose() * uy;
        if (aty.norm() <= opts.tol * std::max(1.0, d.b.norm()) * (-bty)) {
          status = SolveStatus::Infeasible;
          break;
        }
      }
      if (ctx < -1e-12) {
        Eigen::VectorXd axs = d.A * uz + vy;
        if (axs.norm() <= opts.tol * std::max(1.0, d.c.norm()) * (-ctx)) {
          status = SolveStatus::Unbounded;
          break;
        }
      }
    }
  }

  if (best.z.size() == 0) {
    sol.status = status;
    sol.z = Eigen::VectorXd::Zero(n);
    sol.s = Eigen::VectorXd::Zero(m);
    sol.y = Eigen::VectorXd::Zero(m);
    sol.iterations = std::min(iter, opts.max_iters);
    return sol;
  }

  sol = best;
  sol.iterations = std::min(iter, opts.max_iters);
  if (status == SolveStatus::Optimal) {
    sol.status = SolveStatus::Optimal;
  } else if (status == SolveStatus::Infeasible || status == SolveStatus::Unbounded) {
    sol.status = status;
  } else {
    double worst = std::max({sol.primal_residual, sol.dual_residual, sol.gap});
    sol.status = worst <= 100.0 * opts.tol ? SolveStatus::NearOptimal
                                           : SolveStatus::IterationLimit;
  }
  return sol;
}

}  // namespace slcpopt
