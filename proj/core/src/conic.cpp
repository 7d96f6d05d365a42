#include "slcpopt/conic.hpp"

namespace slcpopt {

int ConicProgram::add_vars(int count) {
  int first = num_vars_;
  num_vars_ += count;
  c_.resize(num_vars_, 0.0);
  return first;
}

void ConicProgram::set_objective_term(int var, double coef) {
  if (var < 0 || var >= num_vars_) throw std::invalid_argument("objective variable out of range");
  c_[var] = coef;
}

void ConicProgram::append_block(ConeType type, int dim, const std::vector<LinExpr>& rows) {
  for (const auto& r : rows)
    for (const auto& [var, coef] : r.terms) {
      (void)coef;
      if (var < 0 || var >= num_vars_) throw std::invalid_argument("row variable out of range");
    }
  ConeBlock blk{type, dim, static_cast<int>(rows_.size()), static_cast<int>(rows.size())};
  blocks_.push_back(blk);
  rows_.insert(rows_.end(), rows.begin(), rows.end());
}

void ConicProgram::add_zero(const LinExpr& row) { append_block(ConeType::Zero, 1, {row}); }

void ConicProgram::add_nonneg(const LinExpr& row) { append_block(ConeType::NonNeg, 1, {row}); }

void ConicProgram::add_psd(int k, const std::vector<LinExpr>& entries) {
  if (static_cast<int>(entries.size()) != k * (k + 1) / 2)
    throw std::invalid_argument("PSD block needs k(k+1)/2 upper-triangle entries");
  append_block(ConeType::Psd, k, entries);
}

void ConicProgram::add_exp(const LinExpr& t, const LinExpr& u, const LinExpr& v) {
  append_block(ConeType::Exp, 1, {t, u, v});
}

bool ConicProgram::has_exp() const {
  for (const auto& b : blocks_)
    if (b.type == ConeType::Exp) return true;
  return false;
}

int ConicProgram::max_psd_dim() const {
  int m = 0;
  for (const auto& b : blocks_)
    if (b.type == ConeType::Psd) m = std::max(m, b.dim);
  return m;
}

Eigen::VectorXd ConicProgram::row_values(const Eigen::VectorXd& z) const {
  Eigen::VectorXd v(num_rows());
  for (int i = 0; i < num_rows(); ++i) v[i] = rows_[i].value(z);
  return v;
}

ValidationReport validate_solution(const ConicProgram& prog, const ConicSolution& sol,
                                   double tol) {
  ValidationReport rep;
  Eigen::VectorXd vals = prog.row_values(sol.z);
  for (const auto& blk : prog.blocks()) {
    if (blk.type == ConeType::Zero) {
      for (int r = 0; r < blk.row_count; ++r)
        rep.eq_residual = std::max(rep.eq_residual, std::abs(vals[blk.row_start + r]));
    } else if (blk.type == ConeType::NonNeg) {
      for (int r = 0; r < blk.row_count; ++r)
        rep.cone_violation = std::max(rep.cone_violation, -vals[blk.row_start + r]);
    } else if (blk.type == ConeType::Psd) {
      Eigen::MatrixXd M(blk.dim, blk.dim);
      int idx = blk.row_start;
      for (int i = 0; i < blk.dim; ++i)
        for (int j = i; j < blk.dim; ++j) {
          M(i, j) = vals[idx];
          M(j, i) = vals[idx];
          ++idx;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
      rep.cone_violation = std::max(rep.cone_violation, -es.eigenvalues().minCoeff());
    }
  }
  rep.cone_violation = std::max(rep.cone_violation, 0.0);

  double cz = 0.0;
  for (int i = 0; i < prog.num_vars(); ++i) cz += prog.objective()[i] * sol.z[i];
  double by = 0.0;
  double dual_res = 0.0;
  if (sol.y.size() == prog.num_rows()) {
    // rows are stored as c0 + a.z in cone; in Az + s = b form A = -a, b = c0,
    // so dual feasibility reads c - sum_r y_r a_r = 0 and b.y = sum c0_r y_r.
    Eigen::VectorXd dual = Eigen::VectorXd::Zero(prog.num_vars());
    for (int i = 0; i < prog.num_vars(); ++i) dual[i] = prog.objective()[i];
    for (int r = 0; r < prog.num_rows(); ++r) {
      by += prog.rows()[r].c0 * sol.y[r];
      for (const auto& [var, coef] : prog.rows()[r].terms) dual[var] -= coef * sol.y[r];
    }
    dual_res = dual.size() ? dual.cwiseAbs().maxCoeff() : 0.0;
  }
  rep.dual_residual = dual_res;
  rep.dual_gap = std::abs(cz + by) / (1.0 + std::abs(cz) + std::abs(by));

  double mismatch = std::abs(std::max(rep.eq_residual, rep.cone_violation) - sol.primal_residual);
  mismatch = std::max(mismatch, std::abs(dual_res - sol.dual_residual));
  mismatch = std::max(mismatch, std::abs(rep.dual_gap - sol.gap));
  rep.reported_mismatch = mismatch;
  rep.pass = rep.eq_residual <= tol && rep.cone_violation <= tol && rep.dual_gap <= tol;
  return rep;
}

}  // namespace slcpopt
