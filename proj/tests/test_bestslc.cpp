#include <random>

#include "doctest.h"
#include "slcpopt/bestslc.hpp"
#include "slcpopt/instance_gen.hpp"
#include "slcpopt/oracle.hpp"

using namespace slcpopt;

namespace {

SolveOptions tight() {
  SolveOptions o;
  o.tol = 1e-7;
  o.max_iters = 200000;
  return o;
}

double root_bound(const Polynomial& p, int d,
                  const std::vector<AffineFactor>& extra_family = {}) {
  LiftedRegion region = generate_lifted_region(p.num_vars(), {}, d);
  DualModel model = build_best_slc_program(p, region, d, {}, extra_family);
  ConicSolution sol = solve(model.prog, tight());
  REQUIRE(sol.usable());
  return sol.objective;
}

}  // namespace

TEST_CASE("root bound of the scalar cubic is essentially exact") {
  Polynomial p(1);
  p.add_term({3}, 1.0);
  p.add_term({1}, -1.0);
  const double truth = -0.3849001794597505;  // min of x^3 - x on [0,1]
  const double lb = root_bound(p, 3);
  CHECK(lb <= truth + 1e-6);
  CHECK(lb >= truth - 1e-4);
}

TEST_CASE("largest matrix block is always n+1") {
  for (int n = 2; n <= 4; ++n) {
    for (int d = 3; d <= 5; ++d) {
      Polynomial p = random_polynomial(n, d, default_density(d), 17 * n + d);
      LiftedRegion region = generate_lifted_region(n, {}, d);
      DualModel model = build_best_slc_program(p, region, d);
      CHECK(model.prog.max_psd_dim() == n + 1);
      // contrast: a moment-matrix approach would need binom(n + ceil(d/2), ceil(d/2))
      const int half = (d + 1) / 2;
      double binom = 1.0;
      for (int i = 1; i <= half; ++i) binom = binom * (n + half - i + 1) / i;
      CHECK(binom > n + 1);
    }
  }
}

TEST_CASE("block census pairs one side block and one schur block per family member") {
  Polynomial p = random_polynomial(2, 3, 0.5, 23);
  LiftedRegion region = generate_lifted_region(2, {}, 3);
  DualModel model = build_best_slc_program(p, region, 3);
  int side = 0, schur = 0;
  for (const auto& blk : model.prog.blocks()) {
    if (blk.type != ConeType::Psd) continue;
    if (blk.dim == 2) ++side;
    if (blk.dim == 3) ++schur;
  }
  CHECK(side == 5);   // family of degree 3 on two variables
  CHECK(schur == 5);
}

TEST_CASE("bound dominates every fixed decomposition over the same region") {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    Polynomial p = random_polynomial(n, 3, 0.5, 400 + seed);
    LiftedRegion region = generate_lifted_region(n, {}, 3);
    DualModel model = build_best_slc_program(p, region, 3);
    ConicSolution best = solve(model.prog, tight());
    REQUIRE(best.usable());

    SLCDecomposition dec = construct_slc_degree3(p);
    ConicSolution fixed = solve(build_fixed_decomposition_program(dec, region), tight());
    REQUIRE(fixed.usable());
    CHECK(best.objective >= fixed.objective - 1e-6);
  }
}

TEST_CASE("dual optimum sits above the perspective value of sampled decompositions") {
  for (unsigned seed = 0; seed < 3; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    Polynomial p = random_polynomial(n, 3, 0.5, 500 + seed);
    LiftedRegion region = generate_lifted_region(n, {}, 3);
    DualModel model = build_best_slc_program(p, region, 3);
    ConicSolution sol = solve(model.prog, tight());
    REQUIRE(sol.usable());
    ExtractedPoint pt = extract_bound_and_point(model, sol);
    MatchingSystem ms = build_matching_system(p, 3);
    for (const SLCDecomposition& dec : sample_feasible_decompositions(ms, 20, seed)) {
      const double g = evaluate_g3(dec, pt.x, pt.u);
      CHECK(pt.lb >= g - 1e-6);
    }
  }
}

TEST_CASE("appending a box-implied row leaves the bound unchanged") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    Polynomial p = random_polynomial(n, 3, 0.5, 700 + seed);
    AffineFactor redundant;
    redundant.offset = 1.0;  // 1 - x_1 / 2 >= 0 holds on the unit box
    redundant.coeffs = Eigen::VectorXd::Zero(n);
    redundant.coeffs(0) = -0.5;
    const double plain = root_bound(p, 3);
    const double extended = root_bound(p, 3, {redundant});
    CHECK(extended == doctest::Approx(plain).epsilon(1e-5));
  }
}

TEST_CASE("diagonal-dominance variant never beats the semidefinite bound") {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    Polynomial p = random_polynomial(n, 3, 0.5, 800 + seed);
    LiftedRegion region = generate_lifted_region(n, {}, 3);
    DualModel best = build_best_slc_program(p, region, 3);
    DualModel gersh = build_gershgorin_variant(p, region);
    ConicSolution sb = solve(best.prog, tight());
    ConicSolution sg = solve(gersh.prog, tight());
    REQUIRE(sb.usable());
    REQUIRE(sg.usable());
    CHECK(sg.objective <= sb.objective + 1e-6);
    if (n == 1) CHECK(sg.objective == doctest::Approx(sb.objective).epsilon(1e-6));
  }
}

TEST_CASE("gershgorin variant is restricted to cubic families") {
  Polynomial p = random_polynomial(2, 4, 0.3, 31);
  LiftedRegion region = generate_lifted_region(2, {}, 4);
  CHECK_THROWS_AS(build_gershgorin_variant(p, region), std::invalid_argument);
}

TEST_CASE("polynomial constraints tighten the relaxation monotonically") {
  Polynomial p(2);  // saddle with its box minimum at (1, 0) / (0, 1)
  p.add_term({1, 1}, 2.0);
  p.add_term({1, 0}, -1.0);
  p.add_term({0, 1}, -1.0);
  Polynomial rho(2);  // x1^2 - x2 <= 0 keeps points above the parabola
  rho.add_term({2, 0}, 1.0);
  rho.add_term({0, 1}, -1.0);
  LiftedRegion region = generate_lifted_region(2, {}, 3);
  DualModel boxed = build_best_slc_program(p, region, 3);
  DualModel constrained = build_best_slc_program(p, region, 3, {rho});
  ConicSolution sb = solve(boxed.prog, tight());
  ConicSolution sc = solve(constrained.prog, tight());
  REQUIRE(sb.usable());
  REQUIRE(sc.usable());
  CHECK(sc.objective >= sb.objective - 1e-6);
}

TEST_CASE("extracted points respect the box after clipping") {
  Polynomial p = random_polynomial(3, 3, 0.5, 900);
  LiftedRegion region = generate_lifted_region(3, {}, 3);
  DualModel model = build_best_slc_program(p, region, 3);
  ConicSolution sol = solve(model.prog, tight());
  REQUIRE(sol.usable());
  ExtractedPoint pt = extract_bound_and_point(model, sol);
  CHECK(pt.clip <= 1e-5);
  for (int i = 0; i < 3; ++i) {
    CHECK(pt.x(i) >= 0.0);
    CHECK(pt.x(i) <= 1.0);
    CHECK(pt.u(i, i) >= -1e-6);
    CHECK(pt.u(i, i) <= 1.0 + 1e-6);
  }
}

TEST_CASE("degree-4 objectives solve with third-moment coupling") {
  Polynomial p(2);
  p.add_term({2, 2}, 4.0);
  p.add_term({1, 1}, -4.0);  // 4u^2 - 4u with u = x1 x2: min -1 at u = 1/2
  LiftedRegion region = generate_lifted_region(2, {}, 4);
  DualModel model = build_best_slc_program(p, region, 4);
  ConicSolution sol = solve(model.prog, tight());
  REQUIRE(sol.usable());
  OracleResult oracle = brute_force_min([&] {
    Problem prob;
    prob.n = 2;
    prob.box = Box::unit(2);
    prob.objective = p;
    return prob;
  }());
  CHECK(sol.objective <= oracle.value + 1e-6);
  CHECK(sol.objective >= oracle.value - 0.5);  // finite, sensible bound
}
