#include "slcpopt/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace slcpopt {

namespace {
constexpr double kDropTol = 0.0;  // exact zero only; callers decide rounding
}

int monomial_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), 0);
}

Monomial indices_to_exponents(int n, const std::vector<int>& idx) {
  Monomial m(n, 0);
  for (int i : idx) {
    if (i < 0 || i >= n) throw std::invalid_argument("variable index out of range");
    ++m[i];
  }
  return m;
}

std::vector<int> exponents_to_indices(const Monomial& m) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(m.size()); ++i)
    for (int k = 0; k < m[i]; ++k) idx.push_back(i);
  return idx;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Monomial> monomials_up_to(int n, int d) {
  std::vector<Monomial> out;
  for (int deg = 0; deg <= d; ++deg) {
    Monomial m(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        m[pos] = left;
        out.push_back(m);
        return;
      }
      for (int e = 0; e <= left; ++e) {
        m[pos] = e;
        rec(pos + 1, left - e);
      }
      m[pos] = 0;
    };
    rec(0, deg);
  }
  return out;
}

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  p.add_term(Monomial(n, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("variable index out of range");
  Polynomial p(n);
  Monomial m(n, 0);
  m[i] = 1;
  p.add_term(m, 1.0);
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return 0;
  return monomial_degree(terms_.rbegin()->first);
}

void Polynomial::add_term(const Monomial& m, double coef) {
  if (static_cast<int>(m.size()) != n_)
    throw std::invalid_argument("monomial length does not match variable count");
  if (coef == 0.0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, coef);
  } else {
    it->second += coef;
    if (std::abs(it->second) <= kDropTol) terms_.erase(it);
  }
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("point dimension mismatch");
  double v = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < m[i]; ++k) t *= x[i];
    v += t;
  }
  return v;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("point dimension mismatch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_);
  for (const auto& [m, c] : terms_) {
    for (int i = 0; i < n_; ++i) {
      if (m[i] == 0) continue;
      double t = c * m[i];
      for (int j = 0; j < n_; ++j) {
        int e = (j == i) ? m[j] - 1 : m[j];
        for (int k = 0; k < e; ++k) t *= x[j];
      }
      g[i] += t;
    }
  }
  return g;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.n_ != n_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.n_ != n_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.n_ != n_) throw std::invalid_argument("variable count mismatch");
  Polynomial out(n_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m(n_);
      for (int i = 0; i < n_; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out = *this;
  out += other;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial out = *this;
  out -= other;
  return out;
}

Polynomial Polynomial::affine_substitute(const Eigen::VectorXd& shift,
                                         const Eigen::VectorXd& scale) const {
  if (shift.size() != n_ || scale.size() != n_)
    throw std::invalid_argument("affine substitution dimension mismatch");
  Polynomial out(n_);
  for (const auto& [m, c] : terms_) {
    Polynomial term = Polynomial::constant(n_, c);
    for (int i = 0; i < n_; ++i) {
      if (m[i] == 0) continue;
      Polynomial factor = Polynomial::constant(n_, shift[i]);
      Polynomial xi = Polynomial::variable(n_, i);
      xi *= scale[i];
      factor += xi;
      for (int k = 0; k < m[i]; ++k) term = term * factor;
    }
    out += term;
  }
  return out;
}

std::map<std::vector<int>, double> Polynomial::tensor(int k) const {
  std::map<std::vector<int>, double> out;
  for (const auto& [m, c] : terms_) {
    if (monomial_degree(m) != k) continue;
    out.emplace(exponents_to_indices(m), c);
  }
  return out;
}

double Polynomial::l1_norm() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += std::abs(c);
  return s;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    os << std::abs(c);
    for (int i = 0; i < n_; ++i) {
      if (m[i] == 0) continue;
      os << "*x" << i;
      if (m[i] > 1) os << "^" << m[i];
    }
    first = false;
  }
  return os.str();
}

Box::Box(Eigen::VectorXd l, Eigen::VectorXd u) : lower(std::move(l)), upper(std::move(u)) {
  if (lower.size() != upper.size()) throw std::invalid_argument("box bound length mismatch");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("box has lower > upper");
}

Box Box::unit(int n) {
  return Box(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
}

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != lower.size()) return false;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

Eigen::VectorXd Box::clamp(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

Polynomial to_unit_box(const Polynomial& p, const Box& box) {
  if (box.dim() != p.num_vars()) throw std::invalid_argument("box dimension mismatch");
  return p.affine_substitute(box.lower, box.upper - box.lower);
}

}  // namespace slcpopt
