#include "slcpopt/matching.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace slcpopt {

int MatchingSystem::q_col(int block, int k, int l) const {
  if (k > l) std::swap(k, l);
  // offset of pair (k,l), k <= l, in lex order (0,0),(0,1),...,(0,n-1),(1,1),...
  int off = k * n - k * (k - 1) / 2 + (l - k);
  return block * cols_per_block() + off;
}

int MatchingSystem::r_col(int block, int k) const {
  return block * cols_per_block() + n * (n + 1) / 2 + k;
}

int MatchingSystem::w_col(int block) const {
  return block * cols_per_block() + n * (n + 1) / 2 + n;
}

Eigen::MatrixXd MatchingSystem::row_matrix(int j, int block) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      double a = A(j, q_col(block, k, l));
      M(k, l) = a;
      M(l, k) = a;
    }
  return M;
}

Eigen::VectorXd MatchingSystem::row_vector(int j, int block) const {
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = A(j, r_col(block, k));
  return v;
}

double MatchingSystem::row_scalar(int j, int block) const { return A(j, w_col(block)); }

Eigen::VectorXd MatchingSystem::vectorize(const SLCDecomposition& dec) const {
  if (dec.n != n) throw std::invalid_argument("decomposition dimension mismatch");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(num_cols());
  for (int b = 0; b < num_blocks(); ++b) {
    const ConvexBlock* blk = dec.find(family[b]);
    if (!blk) continue;
    if (blk->has_higher()) throw std::invalid_argument("quadratic blocks required");
    for (int k = 0; k < n; ++k) {
      for (int l = k; l < n; ++l)
        z[q_col(b, k, l)] = (k == l) ? blk->Q(k, k) : 2.0 * blk->Q(k, l);
      z[r_col(b, k)] = blk->r[k];
    }
    z[w_col(b)] = blk->w;
  }
  return z;
}

SLCDecomposition MatchingSystem::devectorize(const Eigen::VectorXd& z) const {
  if (z.size() != num_cols()) throw std::invalid_argument("vector length mismatch");
  SLCDecomposition dec;
  dec.n = n;
  dec.degree = d;
  dec.form = SlcForm::ProductQuadratic;
  dec.affine_factors = affine_factors;
  for (int b = 0; b < num_blocks(); ++b) {
    ConvexBlock blk(n);
    for (int k = 0; k < n; ++k) {
      for (int l = k; l < n; ++l) {
        double q = z[q_col(b, k, l)];
        if (k == l)
          blk.Q(k, k) = q;
        else {
          blk.Q(k, l) = 0.5 * q;
          blk.Q(l, k) = 0.5 * q;
        }
      }
      blk.r[k] = z[r_col(b, k)];
    }
    blk.w = z[w_col(b)];
    dec.blocks.emplace_back(family[b], blk);
  }
  return dec;
}

double MatchingSystem::max_row_residual(const Eigen::VectorXd& z) const {
  return (A * z - s).cwiseAbs().maxCoeff();
}

MatchingSystem build_matching_system(const Polynomial& p, int d,
                                     const std::vector<AffineFactor>& extra) {
  const int n = p.num_vars();
  if (p.degree() > d) throw std::invalid_argument("polynomial degree exceeds family degree");

  MatchingSystem ms;
  ms.n = n;
  ms.d = d;
  ms.family = enumerate_family(n, d);
  ms.affine_factors = extra;
  for (int a = 0; a < static_cast<int>(extra.size()); ++a)
    ms.family.push_back(BlockKey{{}, {}, a});
  ms.row_monomials = monomials_up_to(n, d);

  std::map<Monomial, int, GradedLexLess> row_of;
  for (int j = 0; j < ms.num_rows(); ++j) row_of.emplace(ms.row_monomials[j], j);

  ms.A = Eigen::MatrixXd::Zero(ms.num_rows(), ms.num_cols());
  ms.s = Eigen::VectorXd::Zero(ms.num_rows());
  for (const auto& [m, c] : p.terms()) ms.s[row_of.at(m)] = c;

  SLCDecomposition shell;
  shell.n = n;
  shell.degree = d;
  shell.affine_factors = extra;

  for (int b = 0; b < ms.num_blocks(); ++b) {
    Polynomial f = shell.factor_polynomial(ms.family[b]);
    auto scatter = [&](const Polynomial& slot_poly, int col) {
      for (const auto& [m, c] : slot_poly.terms()) {
        auto it = row_of.find(m);
        if (it == row_of.end())
          throw std::logic_error("family block produces terms above the tracked degree");
        ms.A(it->second, col) += c;
      }
    };
    for (int k = 0; k < n; ++k) {
      for (int l = k; l < n; ++l) {
        Polynomial mono(n);
        Monomial e(n, 0);
        ++e[k];
        ++e[l];
        mono.add_term(e, 1.0);
        scatter(f * mono, ms.q_col(b, k, l));
      }
      scatter(f * Polynomial::variable(n, k), ms.r_col(b, k));
    }
    scatter(f, ms.w_col(b));
  }
  return ms;
}

}  // namespace slcpopt
