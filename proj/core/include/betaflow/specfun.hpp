#pragma once

#include <complex>
#include <cstddef>

namespace betaflow::specfun {

using complex_t = std::complex<double>;

/// Truncation budget for power-series evaluation.
struct SeriesBudget {
    std::size_t max_terms = 10000;
    double tail_tol = 1e-16;  // absolute term magnitude at which to stop
};

/// Natural log of the gamma function for x > 0.
///
/// Lanczos rational approximation (g = 607/128, 15 coefficients) with the
/// reflection formula for x < 0.5. Absolute error below 1e-12 on
/// [1e-3, 1e3]; the inner products are accumulated in long double so the
/// large (x+1/2)ln(x+g+1/2) term does not erode the low digits.
///
/// Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// Regularized incomplete beta function I_x(a,b), the Beta(a,b) CDF.
///
/// Continued fraction (modified Lentz) with the symmetry switch
/// I_x(a,b) = 1 - I_{1-x}(b,a) applied for x > (a+1)/(a+b+2).
/// Throws std::domain_error outside 0 <= x <= 1, a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

/// Regularized lower incomplete gamma function P(a,x), the Gamma(a) CDF.
///
/// Power series for x < a+1, continued fraction for the complement
/// otherwise. Throws std::domain_error outside a > 0, x >= 0.
double reg_inc_gamma(double a, double x);

/// Gauss hypergeometric function 2F1(a,b;c;eta) by direct power series,
/// valid for |eta| < 1 (no analytic continuation).
///
/// Terms are added until the term magnitude drops below budget.tail_tol;
/// throws betaflow::no_convergence_error if budget.max_terms is exhausted
/// first, and std::domain_error if |eta| >= 1 or c is a nonpositive integer.
complex_t hyp2f1(double a, double b, double c, complex_t eta,
                 SeriesBudget budget = {});

}  // namespace betaflow::specfun
