#include <random>

#include "doctest.h"
#include "slcpopt/instance_gen.hpp"
#include "slcpopt/slc.hpp"

using namespace slcpopt;

namespace {

Eigen::VectorXd random_point(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = dist(rng);
  return x;
}

}  // namespace

TEST_CASE("family enumeration sizes") {
  // pairs (xs, ones) of disjointly-colored multisets with total size <= d-2
  CHECK(enumerate_family(1, 3).size() == 3);    // {}, x1, (1-x1)
  CHECK(enumerate_family(2, 3).size() == 5);
  CHECK(enumerate_family(2, 4).size() == 15);
  CHECK(enumerate_family(1, 4).size() == 6);
}

TEST_CASE("tiling constant counts multisets of size up to d-2") {
  CHECK(family_tiling_constant(3, 3) == doctest::Approx(4.0));    // 1 + n
  CHECK(family_tiling_constant(2, 4) == doctest::Approx(6.0));    // 1 + n + n(n+1)/2
  CHECK(family_tiling_constant(4, 4) == doctest::Approx(15.0));
}

TEST_CASE("split weights are multiset binomials") {
  CHECK(block_split_weight({{0}, {}, -1}) == doctest::Approx(1.0));
  CHECK(block_split_weight({{0}, {0}, -1}) == doctest::Approx(2.0));  // C(2,1)
  CHECK(block_split_weight({{0, 0}, {}, -1}) == doctest::Approx(1.0));
  CHECK(block_split_weight({{0, 1}, {1}, -1}) == doctest::Approx(2.0));
  CHECK(block_split_weight({{}, {}, 0}) == doctest::Approx(0.0));  // affine-keyed
}

TEST_CASE("weighted factors tile the box: sum of weight * factor == constant") {
  std::mt19937 rng(3);
  for (int d = 3; d <= 5; ++d) {
    for (int n = 1; n <= 3; ++n) {
      const double target = family_tiling_constant(n, d);
      for (int t = 0; t < 5; ++t) {
        Eigen::VectorXd x = random_point(rng, n);
        double sum = 0.0;
        SLCDecomposition shell;
        shell.n = n;
        for (const BlockKey& key : enumerate_family(n, d))
          sum += block_split_weight(key) * shell.factor_polynomial(key).evaluate(x);
        CHECK(sum == doctest::Approx(target).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("gershgorin defect and alpha") {
  Eigen::MatrixXd q(2, 2);
  q << 1.0, -2.0, -2.0, 0.5;
  CHECK(gershgorin_defect(q) == doctest::Approx(1.5));  // row 2: 2 - 0.5
  CHECK(gershgorin_alpha(q) == doctest::Approx(1.5));
  Eigen::MatrixXd dd(2, 2);
  dd << 3.0, 1.0, 1.0, 2.0;
  CHECK(gershgorin_defect(dd) == doctest::Approx(-1.0));
  CHECK(gershgorin_alpha(dd) == doctest::Approx(0.0));
}

TEST_CASE("cubic decomposition of x^3 - x is exact convex and shift-free") {
  Polynomial p(1);
  p.add_term({3}, 1.0);
  p.add_term({1}, -1.0);
  SLCDecomposition dec = construct_slc_degree3(p);
  CHECK(dec.alpha == doctest::Approx(0.0));
  CHECK(dec.all_blocks_convex());
  CHECK((dec.reconstruct() - p).l1_norm() == doctest::Approx(0.0));
  const ConvexBlock* b = dec.find({{0}, {}, -1});
  REQUIRE(b != nullptr);
  CHECK(b->Q(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("degree-5 monomial lands in the block of its leading indices") {
  Polynomial p(5);
  p.add_term({1, 1, 1, 1, 1}, 1.0);
  SLCDecomposition dec = construct_slc(p, 5);
  const ConvexBlock* b = dec.find({{0, 1, 2}, {}, -1});
  REQUIRE(b != nullptr);
  CHECK(b->Q(3, 4) == doctest::Approx(0.5));
  CHECK(b->Q(4, 3) == doctest::Approx(0.5));
  Eigen::VectorXd x(5);
  x << 0.9, 0.8, 0.7, 0.6, 0.5;
  CHECK(dec.evaluate(x) == doctest::Approx(p.evaluate(x)).epsilon(1e-12));
}

TEST_CASE("reconstruction and convexity hold on random instances") {
  for (int d = 3; d <= 5; ++d) {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const int n = 1 + static_cast<int>(seed % 4);
      Polynomial p = random_polynomial(n, d, default_density(d), seed * 7 + d);
      SLCDecomposition dec = construct_slc(p, d);
      const double scale = std::max(1.0, p.l1_norm());
      CHECK((dec.reconstruct() - p).l1_norm() <= 1e-9 * scale);
      CHECK(dec.all_blocks_convex(1e-9));
      std::mt19937 rng(seed);
      Eigen::VectorXd x = random_point(rng, n);
      CHECK(dec.evaluate(x) == doctest::Approx(p.evaluate(x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("the convexification shift is minimal over the family") {
  // Wherever alpha > 0, some weighted block must be exactly at the dominance
  // boundary: shrinking every shift by 1e-3 breaks convexity.
  for (unsigned seed = 20; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    Polynomial p = random_polynomial(n, 3, 0.5, seed);
    SLCDecomposition dec = construct_slc_degree3(p);
    if (dec.alpha <= 1e-9) continue;
    double worst = -1e300;
    for (const auto& [key, block] : dec.blocks)
      if (block_split_weight(key) > 0.0)
        worst = std::max(worst, gershgorin_defect(block.Q));
    CHECK(worst >= -1e-7);  // binding block sits on the boundary
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("first-type decomposition reconstructs with convex blocks") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    Polynomial p = random_polynomial(2, 3, 0.6, 100 + seed);
    SLCDecomposition dec = construct_slc_first_type(p);
    CHECK(dec.form == SlcForm::FirstType);
    const double scale = std::max(1.0, p.l1_norm());
    CHECK((dec.reconstruct() - p).l1_norm() <= 1e-9 * scale);
    CHECK(dec.all_blocks_convex(1e-9));
  }
}

TEST_CASE("quadratic objective decomposes with the quadratic in the empty block") {
  Polynomial p(1);
  p.add_term({2}, 1.0);
  p.add_term({1}, -1.0);
  SLCDecomposition dec = construct_slc_degree3(p);
  CHECK((dec.reconstruct() - p).l1_norm() == doctest::Approx(0.0));
  Eigen::VectorXd x(1);
  x << 0.5;
  CHECK(dec.evaluate(x) == doctest::Approx(-0.25));
}
