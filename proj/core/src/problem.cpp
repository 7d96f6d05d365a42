#include "slcpopt/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "slcpopt/formats.hpp"

namespace slcpopt {

using nlohmann::json;

int Problem::max_degree() const {
  int d = objective.degree();
  for (const auto& c : constraints)
    if (c.kind == ConstraintKind::PolynomialIneq) d = std::max(d, c.poly.degree());
  return d;
}

bool Problem::has_log_sum_exp() const {
  for (const auto& c : constraints)
    if (c.kind == ConstraintKind::LogSumExp) return true;
  return false;
}

double log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::exp(x(i) - m);
  return m + std::log(s);
}

double Problem::max_violation(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& c : constraints) {
    if (c.kind == ConstraintKind::LogSumExp)
      v = std::max(v, log_sum_exp(x) - c.alpha);
    else
      v = std::max(v, c.poly.evaluate(x));
  }
  return v;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("problem: " + msg); }

Polynomial parse_terms(const json& arr, int n, const std::string& where) {
  if (!arr.is_array()) fail(where + " must be an array of terms");
  Polynomial p(n);
  int idx = 0;
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("exps") || !t.contains("coef"))
      fail(where + " term " + std::to_string(idx) + " needs exps and coef");
    const auto& e = t["exps"];
    if (!e.is_array() || static_cast<int>(e.size()) != n)
      fail(where + " term " + std::to_string(idx) + ": exps length must equal n");
    Monomial m(n, 0);
    for (int i = 0; i < n; ++i) {
      if (!e[i].is_number_integer() || e[i].get<int>() < 0)
        fail(where + " term " + std::to_string(idx) + ": exps must be nonnegative integers");
      m[i] = e[i].get<int>();
    }
    if (monomial_degree(m) > kMaxDegree)
      fail(where + " term " + std::to_string(idx) + ": degree exceeds cap " +
           std::to_string(kMaxDegree));
    if (!t["coef"].is_number())
      fail(where + " term " + std::to_string(idx) + ": coef must be a number");
    p.add_term(m, t["coef"].get<double>());
    ++idx;
  }
  return p;
}

json terms_to_json(const Polynomial& p) {
  json arr = json::array();
  for (const auto& [m, c] : p.terms()) {
    json t;
    t["exps"] = m;
    t["coef"] = c;
    arr.push_back(t);
  }
  return arr;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) fail("field n (integer) required");

  Problem prob;
  prob.n = j["n"].get<int>();
  if (prob.n < 1 || prob.n > 64) fail("n out of range [1, 64]");

  Eigen::VectorXd lo = Eigen::VectorXd::Zero(prob.n);
  Eigen::VectorXd hi = Eigen::VectorXd::Ones(prob.n);
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    if (!b.is_array() || static_cast<int>(b.size()) != prob.n)
      fail("bounds must list one [lo, hi] pair per variable");
    for (int i = 0; i < prob.n; ++i) {
      if (!b[i].is_array() || b[i].size() != 2 || !b[i][0].is_number() || !b[i][1].is_number())
        fail("bounds[" + std::to_string(i) + "] must be [lo, hi]");
      lo(i) = b[i][0].get<double>();
      hi(i) = b[i][1].get<double>();
      if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)))
        fail("bounds[" + std::to_string(i) + "] must be finite");
    }
  }
  prob.box = Box(lo, hi);

  if (!j.contains("objective")) fail("field objective required");
  prob.objective = parse_terms(j["objective"], prob.n, "objective");

  if (j.contains("constraints")) {
    if (!j["constraints"].is_array()) fail("constraints must be an array");
    int idx = 0;
    for (const auto& c : j["constraints"]) {
      const std::string where = "constraints[" + std::to_string(idx) + "]";
      if (!c.is_object() || !c.contains("kind")) fail(where + " needs a kind");
      const std::string kind = c["kind"].get<std::string>();
      Constraint out;
      if (kind == "linear") {
        out.kind = ConstraintKind::Linear;
        out.poly = parse_terms(c.value("terms", json::array()), prob.n, where);
        if (out.poly.degree() > 1) fail(where + ": linear constraint has degree > 1");
      } else if (kind == "polynomial") {
        out.kind = ConstraintKind::PolynomialIneq;
        out.poly = parse_terms(c.value("terms", json::array()), prob.n, where);
      } else if (kind == "log_sum_exp") {
        out.kind = ConstraintKind::LogSumExp;
        out.poly = Polynomial(prob.n);
        if (!c.contains("alpha") || !c["alpha"].is_number())
          fail(where + ": log_sum_exp needs numeric alpha");
        out.alpha = c["alpha"].get<double>();
      } else {
        fail(where + ": unknown kind '" + kind + "'");
      }
      prob.constraints.push_back(std::move(out));
      ++idx;
    }
  }
  return prob;
}

std::string problem_to_json(const Problem& prob) {
  nlohmann::ordered_json j;
  j["n"] = prob.n;
  json bounds = json::array();
  for (int i = 0; i < prob.n; ++i)
    bounds.push_back(json::array({prob.box.lower(i), prob.box.upper(i)}));
  j["bounds"] = bounds;
  j["objective"] = terms_to_json(prob.objective);
  json cons = json::array();
  for (const auto& c : prob.constraints) {
    json e;
    switch (c.kind) {
      case ConstraintKind::Linear:
        e["kind"] = "linear";
        e["terms"] = terms_to_json(c.poly);
        break;
      case ConstraintKind::PolynomialIneq:
        e["kind"] = "polynomial";
        e["terms"] = terms_to_json(c.poly);
        break;
      case ConstraintKind::LogSumExp:
        e["kind"] = "log_sum_exp";
        e["alpha"] = c.alpha;
        break;
    }
    cons.push_back(e);
  }
  if (!cons.empty()) j["constraints"] = cons;
  return j.dump(2) + "\n";
}

Eigen::VectorXd NormalizedProblem::to_original(const Eigen::VectorXd& y) const {
  return original.lower + (original.upper - original.lower).cwiseProduct(y);
}

Eigen::VectorXd NormalizedProblem::to_unit(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x - original.lower;
  for (int i = 0; i < y.size(); ++i) {
    const double w = original.upper(i) - original.lower(i);
    y(i) = w > 0 ? y(i) / w : 0.0;
  }
  return y;
}

NormalizedProblem normalize_to_unit(const Problem& prob) {
  NormalizedProblem out;
  out.original = prob.box;
  out.unit = prob;
  out.unit.box = Box::unit(prob.n);
  out.unit.objective = to_unit_box(prob.objective, prob.box);
  for (auto& c : out.unit.constraints) {
    if (c.kind == ConstraintKind::LogSumExp) continue;
    c.poly = to_unit_box(c.poly, prob.box);
  }
  return out;
}

std::vector<AffineFactor> linear_rows(const Problem& unit_problem) {
  std::vector<AffineFactor> rows;
  const int n = unit_problem.n;
  for (const auto& c : unit_problem.constraints) {
    if (c.kind != ConstraintKind::Linear) continue;
    AffineFactor f;
    f.coeffs = Eigen::VectorXd::Zero(n);
    f.offset = -c.poly.coefficient(Monomial(n, 0));
    for (int i = 0; i < n; ++i) {
      Monomial m(n, 0);
      m[i] = 1;
      f.coeffs(i) = -c.poly.coefficient(m);
    }
    rows.push_back(std::move(f));
  }
  return rows;
}

std::vector<Polynomial> polynomial_rows(const Problem& unit_problem) {
  std::vector<Polynomial> out;
  for (const auto& c : unit_problem.constraints)
    if (c.kind == ConstraintKind::PolynomialIneq) out.push_back(c.poly);
  return out;
}

}  // namespace slcpopt
