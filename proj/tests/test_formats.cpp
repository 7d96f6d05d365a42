#include <fstream>
#include <sstream>

#include "doctest.h"
#include "program_fixtures.hpp"
#include "slcpopt/formats.hpp"

using namespace slcpopt;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SLCPOPT_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file ", name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ConicProgram toeplitz_program() {
  ConicProgram p;
  p.add_vars(1);
  p.set_objective_term(0, 1.0);
  p.add_psd(2, {fixtures::expr(0, {{0, 1.0}}), fixtures::expr(1, {}),
                fixtures::expr(0, {{0, 1.0}})});
  return p;
}

ConicProgram mixed_program() {
  // min 2a - b  s.t.  a + b = 1,  a >= 0,  b <= 0.75,  [[a,0.5],[0.5,b]] psd
  ConicProgram p;
  p.add_vars(2);
  p.set_objective_term(0, 2.0);
  p.set_objective_term(1, -1.0);
  p.add_zero(fixtures::expr(-1.0, {{0, 1.0}, {1, 1.0}}));
  p.add_nonneg(fixtures::expr(0.0, {{0, 1.0}}));
  p.add_nonneg(fixtures::expr(0.75, {{1, -1.0}}));
  p.add_psd(2, {fixtures::expr(0, {{0, 1.0}}), fixtures::expr(0.5, {}),
                fixtures::expr(0, {{1, 1.0}})});
  return p;
}

}  // namespace

TEST_CASE("floating point formatting is round-trip precise and stable") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1.0) == "-1");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("sdpa export of the 2x2 spectral example is byte-exact") {
  CHECK(export_sdpa(toeplitz_program()) == slurp("toeplitz.dats"));
}

TEST_CASE("sdpa export of a mixed-cone program is byte-exact") {
  CHECK(export_sdpa(mixed_program()) == slurp("mixed.dats"));
}

TEST_CASE("sdpa header counts variables and blocks") {
  std::istringstream in(export_sdpa(mixed_program()));
  int m = 0, nblock = 0;
  in >> m >> nblock;
  CHECK(m == 2);
  CHECK(nblock == 2);  // one psd block + one diagonal block for scalar rows
}

TEST_CASE("sdpa refuses exponential cones") {
  ConicProgram p;
  p.add_vars(1);
  p.add_exp(fixtures::expr(1, {}), fixtures::expr(1, {}),
            fixtures::expr(0, {{0, 1.0}}));
  CHECK_THROWS_AS(export_sdpa(p), UnsupportedConeError);
}

TEST_CASE("cbf writer exposes psd blocks as matrix variables") {
  ConicProgram p;
  p.add_vars(2);
  p.set_objective_term(0, 1.0);
  std::vector<LinExpr> entries(6, fixtures::expr(1, {}));
  entries[2] = fixtures::expr(0, {{0, 1.0}});
  p.add_psd(3, entries);
  const std::string text = export_cbf(p);
  auto pos = text.find("PSDVAR\n1\n3\n");
  CHECK(pos != std::string::npos);
}

TEST_CASE("cbf round trip preserves optimal values") {
  SolveOptions opts;
  opts.tol = 1e-7;
  opts.max_iters = 200000;
  for (unsigned seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    ConicProgram p = fixtures::random_conic_program(seed);
    ConicSolution direct = solve(p, opts);
    REQUIRE(direct.usable());
    ConicProgram back = parse_cbf(export_cbf(p));
    ConicSolution again = solve(back, opts);
    REQUIRE(again.usable());
    CHECK(again.objective == doctest::Approx(direct.objective).epsilon(1e-6));
  }
}

TEST_CASE("cbf round trip keeps exponential cone rows") {
  ConicProgram p;
  p.add_vars(3);
  p.set_objective_term(0, 1.0);
  p.add_exp(fixtures::expr(0, {{0, 1.0}}), fixtures::expr(1, {}),
            fixtures::expr(-0.5, {{1, 1.0}}));
  p.add_nonneg(fixtures::expr(1.0, {{2, -1.0}}));
  ConicProgram back = parse_cbf(export_cbf(p));
  CHECK(back.has_exp());
  CHECK(back.num_rows() == p.num_rows());
  Eigen::VectorXd z(3);
  z << 0.7, 0.3, 0.2;
  CHECK((back.row_values(z) - p.row_values(z)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("cbf parser reads constrained psd blocks") {
  const std::string text =
      "VER\n3\n\n"
      "OBJSENSE\nMIN\n\n"
      "VAR\n1 1\nF 1\n\n"
      "PSDCON\n1\n2\n\n"
      "OBJACOORD\n1\n0 1.0\n\n"
      "FCOORD\n2\n0 0 0 0 1.0\n0 0 1 1 1.0\n\n"
      "DCOORD\n1\n0 1 0 1.0\n";
  ConicProgram p = parse_cbf(text);
  CHECK(p.max_psd_dim() == 2);
  SolveOptions opts;
  opts.tol = 1e-7;
  ConicSolution sol = solve(p, opts);
  REQUIRE(sol.usable());
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("cbf parser rejects malformed input") {
  CHECK_THROWS(parse_cbf("VER\n7\n"));
  CHECK_THROWS(parse_cbf("VER\n3\nOBJSENSE\nMAX\n"));
  CHECK_THROWS(parse_cbf("VER\n3\nVAR\n1 1\nF 1\nCON\n2 1\nEXP 2\n"));
  CHECK_THROWS(parse_cbf("VER\n3\nVAR\n1 1\nF 1\nOBJACOORD\n1\n5 1.0\n"));
  CHECK_THROWS(parse_cbf(""));
}
