#include <random>

#include "doctest.h"
#include "slcpopt/polynomial.hpp"

using namespace slcpopt;

TEST_CASE("graded lex order sorts by degree then lexicographically") {
  GradedLexLess less;
  CHECK(less({0, 0}, {1, 0}));
  CHECK(less({1, 0}, {0, 2}));   // degree 1 < degree 2
  CHECK(less({0, 2}, {1, 1}));   // same degree, lex
  CHECK(less({1, 1}, {2, 0}));
  CHECK_FALSE(less({2, 0}, {2, 0}));
}

TEST_CASE("monomial enumeration counts binom(n+d, d)") {
  CHECK(monomials_up_to(1, 3).size() == 4);
  CHECK(monomials_up_to(2, 3).size() == 10);
  CHECK(monomials_up_to(3, 4).size() == 35);
  auto ms = monomials_up_to(2, 2);
  REQUIRE(ms.size() == 6);
  CHECK(ms[0] == Monomial{0, 0});
  CHECK(ms[5] == Monomial{2, 0});
  GradedLexLess less;
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) CHECK(less(ms[i], ms[i + 1]));
}

TEST_CASE("index tuple round trip") {
  Monomial m = indices_to_exponents(4, {0, 0, 2});
  CHECK(m == Monomial{2, 0, 1, 0});
  CHECK(exponents_to_indices(m) == std::vector<int>{0, 0, 2});
}

TEST_CASE("arithmetic and evaluation agree on random data") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    Polynomial p(n), q(n);
    for (const Monomial& m : monomials_up_to(n, 3)) {
      if (rng() % 2) p.add_term(m, dist(rng));
      if (rng() % 2) q.add_term(m, dist(rng));
    }
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = dist(rng);
    CHECK((p + q).evaluate(x) == doctest::Approx(p.evaluate(x) + q.evaluate(x)));
    CHECK((p - q).evaluate(x) == doctest::Approx(p.evaluate(x) - q.evaluate(x)));
    CHECK((p * q).evaluate(x) == doctest::Approx(p.evaluate(x) * q.evaluate(x)));
  }
}

TEST_CASE("gradient matches finite differences") {
  Polynomial p(2);
  p.add_term({3, 0}, 2.0);
  p.add_term({1, 1}, -1.5);
  p.add_term({0, 2}, 0.7);
  p.add_term({0, 0}, 3.0);
  Eigen::VectorXd x(2);
  x << 0.4, -0.8;
  Eigen::VectorXd g = p.gradient(x);
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2 * h);
    CHECK(g(i) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("affine substitution maps the unit interval onto a general box") {
  // y^2 on [-1, 1] pulled back to [0, 1] becomes 4x^2 - 4x + 1
  Polynomial p(1);
  p.add_term({2}, 1.0);
  Eigen::VectorXd shift(1), scale(1);
  shift << -1.0;
  scale << 2.0;
  Polynomial q = p.affine_substitute(shift, scale);
  CHECK(q.coefficient({2}) == doctest::Approx(4.0));
  CHECK(q.coefficient({1}) == doctest::Approx(-4.0));
  CHECK(q.coefficient({0}) == doctest::Approx(1.0));
}

TEST_CASE("cubing the shifted variable keeps values aligned") {
  // y^3 with y = -1 + 2x, evaluated at x = 0.25 (y = -0.5), equals -0.125
  Polynomial p(1);
  p.add_term({3}, 1.0);
  Eigen::VectorXd shift(1), scale(1);
  shift << -1.0;
  scale << 2.0;
  Polynomial q = p.affine_substitute(shift, scale);
  Eigen::VectorXd x(1);
  x << 0.25;
  CHECK(q.evaluate(x) == doctest::Approx(-0.125));
}

TEST_CASE("box transfer preserves objective values") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  Polynomial p(2);
  for (const Monomial& m : monomials_up_to(2, 3)) p.add_term(m, dist(rng));
  Eigen::VectorXd lo(2), hi(2);
  lo << -2.0, 0.5;
  hi << 1.0, 3.0;
  Box box(lo, hi);
  Polynomial unit = to_unit_box(p, box);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd u(2);
    u << std::uniform_real_distribution<double>(0, 1)(rng),
        std::uniform_real_distribution<double>(0, 1)(rng);
    Eigen::VectorXd y = lo + (hi - lo).cwiseProduct(u);
    CHECK(unit.evaluate(u) == doctest::Approx(p.evaluate(y)).epsilon(1e-10));
  }
}

TEST_CASE("degree-k tensor collects coefficients by sorted index tuple") {
  Polynomial p(3);
  p.add_term({1, 1, 1}, 6.0);
  p.add_term({2, 1, 0}, 2.0);
  auto t3 = p.tensor(3);
  CHECK(t3.at({0, 1, 2}) == doctest::Approx(6.0));
  CHECK(t3.at({0, 0, 1}) == doctest::Approx(2.0));
  CHECK(t3.size() == 2);
}
