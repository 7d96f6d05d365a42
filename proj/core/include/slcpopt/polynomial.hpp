#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace slcpopt {

// Exponent vector, one entry per variable.
using Monomial = std::vector<int>;

int monomial_degree(const Monomial& m);

// Sorted variable-index tuple, repeated per multiplicity: x1^2*x3 -> {0,0,2}.
Monomial indices_to_exponents(int n, const std::vector<int>& idx);
std::vector<int> exponents_to_indices(const Monomial& m);

// Graded lexicographic order: lower total degree first, then lex on exponents.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// All exponent vectors of total degree <= d, in graded-lex order.
std::vector<Monomial> monomials_up_to(int n, int d);

class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, double c);
  static Polynomial variable(int n, int i);

  int num_vars() const { return n_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  // Accumulates; terms that cancel to ~0 are dropped.
  void add_term(const Monomial& m, double coef);
  double coefficient(const Monomial& m) const;

  double evaluate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;

  // Substitutes x_i -> shift_i + scale_i * x_i and expands.
  Polynomial affine_substitute(const Eigen::VectorXd& shift,
                               const Eigen::VectorXd& scale) const;

  // Coefficients of total degree k, keyed by sorted index tuple.
  std::map<std::vector<int>, double> tensor(int k) const;

  double l1_norm() const;
  std::string to_string() const;

 private:
  int n_ = 0;
  TermMap terms_;
};

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Box() = default;
  Box(Eigen::VectorXd l, Eigen::VectorXd u);
  static Box unit(int n);
  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;
};

// Pullback onto the unit box: q(y) = p(l + (u - l) .* y), y in [0,1]^n.
Polynomial to_unit_box(const Polynomial& p, const Box& box);

}  // namespace slcpopt
