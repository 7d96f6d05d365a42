#include "slcpopt/instance_gen.hpp"

#include <random>
#include <stdexcept>

namespace slcpopt {

namespace {

// Portable uniform double in [0,1): fixed 53-bit construction so the same seed
// yields the same instance on every platform.
double canonical(std::mt19937_64& rng) {
  const std::uint64_t hi = rng() >> 38;  // 26 bits
  const std::uint64_t lo = rng() >> 37;  // 27 bits
  return static_cast<double>((hi << 27) + lo) / 9007199254740992.0;  // 2^53
}

}  // namespace

double default_density(int degree) { return degree >= 4 ? 0.2 : 0.5; }

Polynomial random_polynomial(int n, int degree, double density, unsigned seed) {
  if (n < 1) throw std::invalid_argument("random_polynomial: n must be positive");
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("random_polynomial: degree out of range");
  if (density <= 0.0 || density > 1.0)
    throw std::invalid_argument("random_polynomial: density must be in (0, 1]");
  std::mt19937_64 rng(seed);
  Polynomial p(n);
  for (const Monomial& m : monomials_up_to(n, degree)) {
    if (monomial_degree(m) == 0) continue;
    const double keep = canonical(rng);
    // Coefficient is drawn unconditionally so the stream stays aligned across
    // densities for a fixed seed.
    const double coef = -5.0 + 10.0 * canonical(rng);
    if (keep < density) p.add_term(m, coef);
  }
  if (p.is_zero()) {
    // Degenerate draw; keep the instance usable by forcing one term.
    Monomial m(n, 0);
    m[0] = degree;
    p.add_term(m, -5.0 + 10.0 * canonical(rng));
  }
  return p;
}

Problem generate_instance(int n, int degree, double density, unsigned seed,
                          bool constrained) {
  Problem prob;
  prob.n = n;
  prob.box = Box::unit(n);
  prob.objective = random_polynomial(n, degree, density, seed);
  if (constrained) {
    Polynomial q = random_polynomial(n, 3, 0.5, seed + 0x9e3779b9u);
    Eigen::VectorXd center = 0.5 * (prob.box.lower + prob.box.upper);
    Polynomial rho = q;
    rho.add_term(Monomial(n, 0), -q.evaluate(center) - 0.1);
    Constraint c;
    c.kind = ConstraintKind::PolynomialIneq;
    c.poly = rho;
    prob.constraints.push_back(std::move(c));
  }
  return prob;
}

}  // namespace slcpopt
