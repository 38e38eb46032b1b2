#pragma once

#include "asln/nonlinearity.hpp"
#include "asln/types.hpp"

#include <vector>

namespace asln::hermite {

/// Gauss-Hermite rule for the probabilists' weight exp(-x^2/2)/sqrt(2*pi),
/// i.e. sum_i w_i h(x_i) approximates E[h(xi)] for xi ~ N(0,1). Nodes and
/// weights come from Golub-Welsch on the Jacobi matrix; exact for
/// polynomials up to degree 2n-1.
struct QuadratureRule {
    Vector nodes;
    Vector weights;
};

QuadratureRule gauss_hermite(int n);

/// Probabilists' Hermite polynomial He_n(x) by the three-term recurrence.
double hermite_he(int n, double x);

/// E[f(scale*xi) He_n(xi)] for xi ~ N(0,1).
///
/// All built-in f except tanh are piecewise polynomials with a single
/// breakpoint at 0, so the expectation is evaluated in closed form through
/// the identity  integral_a^inf He_m(x) phi(x) dx = He_{m-1}(a) phi(a)
/// (and the Gaussian tail for m = 0). tanh falls back to a 200-node rule.
double expect_he(Nonlinearity f, int n, double scale = 1.0);

/// E[f(scale*xi)^2].
double expect_sq(Nonlinearity f, double scale = 1.0);

namespace detail {

// Polynomial in monomial coefficients, ascending powers.
using Poly = std::vector<double>;

Poly he_poly(int n);
Poly poly_mul(const Poly& a, const Poly& b);

// integral over (lo, hi) of q(x) phi(x) dx; +-infinity allowed.
double poly_gauss_integral(const Poly& q, double lo, double hi);

}  // namespace detail

}  // namespace asln::hermite
