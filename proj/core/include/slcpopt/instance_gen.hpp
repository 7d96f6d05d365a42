#pragma once

#include "slcpopt/problem.hpp"

namespace slcpopt {

// Default fraction of monomials kept for a random objective of the given degree.
double default_density(int degree);

// Random polynomial on n variables. Every monomial of degree 1..degree is kept
// independently with probability `density`; kept coefficients are uniform in
// [-5, 5]. Deterministic across platforms for a fixed seed.
Polynomial random_polynomial(int n, int degree, double density, unsigned seed);

// Random box-constrained instance on [0,1]^n. When `constrained` is set, one
// cubic inequality rho(x) <= 0 is added, shifted so the box center is strictly
// feasible (keeps the feasible set full-dimensional).
Problem generate_instance(int n, int degree, double density, unsigned seed,
                          bool constrained = false);

}  // namespace slcpopt
