#include <random>

#include "doctest.h"
#include "slcpopt/instance_gen.hpp"
#include "slcpopt/lifting.hpp"

using namespace slcpopt;

TEST_CASE("lifted space identifies moments across formation order") {
  LiftedSpace space(3, 3);
  CHECK(space.total_vars() == 3 + 6 + 10);  // x, pairs, triples
  CHECK(space.flat_index({1}) == 1);
  CHECK(space.flat_index({0, 2}) == space.pair_index(2, 0));
  CHECK(space.flat_index({0, 1, 1}) == space.flat_index({1, 0, 1}));
  CHECK(space.flat_index({2, 2}) >= 3);
}

TEST_CASE("linearize replaces monomials by moment variables") {
  LiftedSpace space(2, 2);
  Polynomial p(2);
  p.add_term({1, 1}, 3.0);
  p.add_term({2, 0}, 1.0);
  p.add_term({0, 1}, -2.0);
  p.add_term({0, 0}, 5.0);
  LinExpr e = space.linearize(p);
  CHECK(e.c0 == doctest::Approx(5.0));
  Eigen::VectorXd vars(space.total_vars());
  vars.setZero();
  vars(0) = 0.3;
  vars(1) = 0.4;
  vars(space.pair_index(0, 1)) = 0.12;
  vars(space.pair_index(0, 0)) = 0.09;
  vars(space.pair_index(1, 1)) = 0.16;
  // exact lifting of (0.3, 0.4): linearized value equals the polynomial value
  Eigen::VectorXd x(2);
  x << 0.3, 0.4;
  CHECK(e.value(vars) == doctest::Approx(p.evaluate(x)).epsilon(1e-12));
}

TEST_CASE("exact lifted points satisfy every generated region row") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 1; n <= 3; ++n) {
    for (int d = 3; d <= 4; ++d) {
      // one nontrivial linear constraint x_1 + ... + x_n <= 0.9 n
      AffineFactor row;
      row.offset = 0.9 * n;
      row.coeffs = -Eigen::VectorXd::Ones(n);
      LiftedRegion region = generate_lifted_region(n, {row}, d);
      CHECK(region.space.max_order() == d - 1);
      int checked = 0;
      while (checked < 20) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = unit(rng);
        if (row.value(x) < 0.0) continue;
        ++checked;
        LiftedPoint pt = LiftedPoint::exact(x, region.space.max_order());
        Eigen::VectorXd vars(region.space.total_vars());
        vars.head(n) = x;
        for (int id = 0; id < region.space.lifted_count(); ++id)
          vars(n + id) = pt.moment(region.space.key_of(id));
        for (const LinExpr& r : region.nonneg) CHECK(r.value(vars) >= -1e-12);
      }
    }
  }
}

TEST_CASE("single-variable region pins the classical envelope rows") {
  LiftedRegion region = generate_lifted_region(1, {}, 3);
  // u must obey u >= 0, u <= x, u >= 2x - 1; check by feasibility probes
  auto violates = [&](double x, double u) {
    Eigen::VectorXd vars(region.space.total_vars());
    vars.setZero();
    vars(0) = x;
    vars(region.space.pair_index(0, 0)) = u;
    for (const LinExpr& r : region.nonneg)
      if (r.value(vars) < -1e-12) return true;
    return false;
  };
  CHECK_FALSE(violates(0.5, 0.25));
  CHECK_FALSE(violates(0.5, 0.5));   // u = x allowed (corner of the envelope)
  CHECK(violates(0.5, 0.55));        // u > x cut away
  CHECK(violates(0.5, -0.01));       // u < 0 cut away
  CHECK(violates(0.9, 0.7));         // u < 2x-1 cut away
  CHECK(violates(1.2, 0.5));         // x > 1 cut away
}

TEST_CASE("perspective value collapses to the plain value at exact points") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    Polynomial p = random_polynomial(n, 3, 0.5, 40 + seed);
    SLCDecomposition dec = construct_slc_degree3(p);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = unit(rng);
    Eigen::MatrixXd U = x * x.transpose();
    CHECK(evaluate_g3(dec, x, U) == doctest::Approx(p.evaluate(x)).epsilon(1e-9));
    LiftedPoint pt = LiftedPoint::exact(x, 2);
    CHECK(evaluate_g(dec, pt) == doctest::Approx(p.evaluate(x)).epsilon(1e-9));
  }
}

TEST_CASE("perspective convention at t = 0") {
  // block keyed by x_1 evaluated where x_1 = 0: factor t vanishes
  Polynomial p(1);
  p.add_term({3}, 1.0);  // x^3 = x * x^2
  SLCDecomposition dec = construct_slc_degree3(p);
  Eigen::VectorXd x(1);
  x << 0.0;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(1, 1);
  CHECK(evaluate_g3(dec, x, U) == doctest::Approx(0.0));  // z = 0: quad piece 0
  U(0, 0) = 0.25;  // z != 0 while t = 0: quadratic piece blows up
  CHECK(std::isinf(evaluate_g3(dec, x, U)));
}

TEST_CASE("degree-4 perspective uses third moments") {
  Polynomial p(2);
  p.add_term({2, 2}, 1.0);  // x1^2 x2^2
  SLCDecomposition dec = construct_slc(p, 4);
  Eigen::VectorXd x(2);
  x << 0.5, 0.8;
  LiftedPoint pt = LiftedPoint::exact(x, 3);
  CHECK(evaluate_g(dec, pt) == doctest::Approx(p.evaluate(x)).epsilon(1e-9));
}
