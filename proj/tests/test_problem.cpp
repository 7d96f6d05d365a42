#include <cmath>

#include "doctest.h"
#include "slcpopt/problem.hpp"

using namespace slcpopt;

namespace {

const char* kCubic = R"({
  "n": 1,
  "objective": [{"exps": [3], "coef": 1.0}, {"exps": [1], "coef": -1.0}]
})";

}  // namespace

TEST_CASE("minimal problem parses with default unit bounds") {
  Problem prob = parse_problem(kCubic);
  CHECK(prob.n == 1);
  CHECK(prob.box.lower(0) == 0.0);
  CHECK(prob.box.upper(0) == 1.0);
  CHECK(prob.objective.degree() == 3);
  CHECK(prob.constraints.empty());
  Eigen::VectorXd x(1);
  x << 0.5;
  CHECK(prob.objective.evaluate(x) == doctest::Approx(-0.375));
}

TEST_CASE("full problem parses all constraint kinds") {
  Problem prob = parse_problem(R"({
    "n": 2,
    "bounds": [[-1, 2], [0.5, 3]],
    "objective": [{"exps": [1, 1], "coef": 2.0}],
    "constraints": [
      {"kind": "linear", "terms": [{"exps": [1, 0], "coef": 1.0}, {"exps": [0, 0], "coef": -1.5}]},
      {"kind": "polynomial", "terms": [{"exps": [2, 0], "coef": 1.0}, {"exps": [0, 1], "coef": -1.0}]},
      {"kind": "log_sum_exp", "alpha": 2.5}
    ]
  })");
  CHECK(prob.box.lower(0) == -1.0);
  CHECK(prob.box.upper(1) == 3.0);
  REQUIRE(prob.constraints.size() == 3);
  CHECK(prob.constraints[0].kind == ConstraintKind::Linear);
  CHECK(prob.constraints[1].kind == ConstraintKind::PolynomialIneq);
  CHECK(prob.constraints[2].kind == ConstraintKind::LogSumExp);
  CHECK(prob.constraints[2].alpha == 2.5);
  CHECK(prob.max_degree() == 2);
  CHECK(prob.has_log_sum_exp());
}

TEST_CASE("parse errors name the offending field") {
  auto message = [](const std::string& text) {
    try {
      parse_problem(text);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("not json").find("invalid JSON") != std::string::npos);
  CHECK(message("[]").find("top level") != std::string::npos);
  CHECK(message(R"({"objective": []})").find("field n") != std::string::npos);
  CHECK(message(R"({"n": 0, "objective": []})").find("out of range") != std::string::npos);
  CHECK(message(R"({"n": 1})").find("objective required") != std::string::npos);
  CHECK(message(R"({"n": 1, "bounds": [[0, 1], [0, 1]], "objective": []})")
            .find("one [lo, hi] pair") != std::string::npos);
  CHECK(message(R"({"n": 1, "bounds": [[0, "x"]], "objective": []})")
            .find("bounds[0]") != std::string::npos);

  // term errors carry the term index
  std::string m =
      message(R"({"n": 2, "objective": [{"exps": [1], "coef": 1.0}]})");
  CHECK(m.find("term 0") != std::string::npos);
  CHECK(m.find("exps length") != std::string::npos);
  m = message(R"({"n": 1, "objective": [{"exps": [1], "coef": 1.0}, {"exps": [-1], "coef": 1.0}]})");
  CHECK(m.find("term 1") != std::string::npos);
  m = message(R"({"n": 1, "objective": [{"exps": [7], "coef": 1.0}]})");
  CHECK(m.find("degree exceeds cap") != std::string::npos);
  m = message(R"({"n": 1, "objective": [{"exps": [1], "coef": "big"}]})");
  CHECK(m.find("coef must be a number") != std::string::npos);

  CHECK(message(R"({"n": 1, "objective": [], "constraints": [{"kind": "conic"}]})")
            .find("unknown kind") != std::string::npos);
  CHECK(message(R"({"n": 1, "objective": [], "constraints": [{"kind": "log_sum_exp"}]})")
            .find("alpha") != std::string::npos);
  m = message(
      R"({"n": 1, "objective": [], "constraints": [{"kind": "linear", "terms": [{"exps": [2], "coef": 1.0}]}]})");
  CHECK(m.find("degree > 1") != std::string::npos);
}

TEST_CASE("non-finite bounds are rejected") {
  CHECK_THROWS_AS(
      parse_problem(R"({"n": 1, "bounds": [[0, 1e999]], "objective": []})"),
      std::runtime_error);
}

TEST_CASE("json round trip preserves the problem") {
  Problem prob = parse_problem(R"({
    "n": 2,
    "bounds": [[-1, 2], [0.5, 3]],
    "objective": [{"exps": [3, 0], "coef": 0.75}, {"exps": [1, 1], "coef": -2.0}],
    "constraints": [
      {"kind": "linear", "terms": [{"exps": [0, 1], "coef": 1.0}, {"exps": [0, 0], "coef": -2.0}]},
      {"kind": "log_sum_exp", "alpha": 1.25}
    ]
  })");
  Problem again = parse_problem(problem_to_json(prob));
  CHECK(again.n == prob.n);
  CHECK((again.box.lower - prob.box.lower).norm() == 0.0);
  CHECK((again.box.upper - prob.box.upper).norm() == 0.0);
  CHECK((again.objective - prob.objective).l1_norm() == 0.0);
  REQUIRE(again.constraints.size() == prob.constraints.size());
  CHECK((again.constraints[0].poly - prob.constraints[0].poly).l1_norm() == 0.0);
  CHECK(again.constraints[1].alpha == prob.constraints[1].alpha);
}

TEST_CASE("normalization preserves objective values") {
  Problem prob = parse_problem(R"({
    "n": 2,
    "bounds": [[-2, 1], [0.5, 3]],
    "objective": [{"exps": [3, 0], "coef": 1.0}, {"exps": [1, 1], "coef": -1.5}, {"exps": [0, 0], "coef": 0.25}],
    "constraints": [
      {"kind": "polynomial", "terms": [{"exps": [2, 0], "coef": 1.0}, {"exps": [0, 0], "coef": -1.0}]}
    ]
  })");
  NormalizedProblem norm = normalize_to_unit(prob);
  CHECK(norm.unit.box.lower.isZero());
  CHECK(norm.unit.box.upper.isOnes());
  Eigen::VectorXd y(2);
  y << 0.3, 0.8;
  Eigen::VectorXd x = norm.to_original(y);
  CHECK(x(0) == doctest::Approx(-2.0 + 3.0 * 0.3));
  CHECK(norm.unit.objective.evaluate(y) == doctest::Approx(prob.objective.evaluate(x)).epsilon(1e-12));
  CHECK(norm.unit.constraints[0].poly.evaluate(y) ==
        doctest::Approx(prob.constraints[0].poly.evaluate(x)).epsilon(1e-12));
  CHECK((norm.to_unit(x) - y).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("linear rows flip into nonnegativity form") {
  // x1 + 2 x2 - 1.5 <= 0  becomes  1.5 - x1 - 2 x2 >= 0
  Problem prob = parse_problem(R"({
    "n": 2,
    "objective": [],
    "constraints": [
      {"kind": "linear", "terms": [{"exps": [1, 0], "coef": 1.0}, {"exps": [0, 1], "coef": 2.0}, {"exps": [0, 0], "coef": -1.5}]}
    ]
  })");
  auto rows = linear_rows(prob);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].offset == doctest::Approx(1.5));
  CHECK(rows[0].coeffs(0) == doctest::Approx(-1.0));
  CHECK(rows[0].coeffs(1) == doctest::Approx(-2.0));
  CHECK(polynomial_rows(prob).empty());
}

TEST_CASE("max_violation covers polynomial and lse constraints") {
  Problem prob = parse_problem(R"({
    "n": 2,
    "objective": [],
    "constraints": [
      {"kind": "polynomial", "terms": [{"exps": [2, 0], "coef": 1.0}, {"exps": [0, 1], "coef": -1.0}]},
      {"kind": "log_sum_exp", "alpha": 1.0}
    ]
  })");
  Eigen::VectorXd ok(2), bad(2);
  ok << 0.2, 0.3;  // 0.04 - 0.3 < 0 and lse(0.2, 0.3) = 0.944 < 1
  bad << 1.0, 0.0;
  CHECK(prob.max_violation(ok) == doctest::Approx(0.0));
  CHECK(prob.max_violation(bad) > 0.3);  // lse(1, 0) = 1.313 and 1 - 0 = 1
}

TEST_CASE("log_sum_exp is overflow safe") {
  Eigen::VectorXd x(2);
  x << 1000.0, 1000.0;
  CHECK(log_sum_exp(x) == doctest::Approx(1000.0 + std::log(2.0)));
  Eigen::VectorXd y(1);
  y << -745.0;
  CHECK(log_sum_exp(y) == doctest::Approx(-745.0));
}
