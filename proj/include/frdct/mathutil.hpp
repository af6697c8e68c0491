#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace frdct::mathutil {

inline constexpr double kPi = 3.14159265358979323846;

// Standard normal density, distribution function, and quantile (Acklam's
// rational approximation polished by one Halley step; |error| < 1e-15 on
// (0,1)).
double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete gamma P(a,x) and Q(a,x)=1-P(a,x), by series for
// x < a+1 and continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_sf(double x, int dof);

// Regularized incomplete beta I_x(a,b) via Lentz continued fraction.
double beta_inc(double a, double b, double x);

// Quantile function of Beta(a,b), by bracketed Newton to 1e-12.
double beta_quantile(double p, double a, double b);

// Smallest value q such that the multiset {(values_i, weights_i)} has
// cumulative weight >= u * total at q (lower-quantile convention).
// Weights must be nonnegative with positive total.
double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double u);

// Adaptive Simpson quadrature on [a,b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

// 2-D tensor quadrature: nested adaptive Simpson, inner in y.
double integrate2d(const std::function<double(double, double)>& f, double ax,
                   double bx, double ay, double by, double tol = 1e-8);

// n equally spaced points from a to b inclusive (n >= 2), or {a} for n == 1.
std::vector<double> linspace(double a, double b, std::size_t n);

// Safeguarded bisection/secant root of f on [lo,hi]; requires a sign change.
// Stops when |f| <= f_tol or the bracket is narrower than x_tol.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double f_tol = 1e-12, double x_tol = 1e-14);

bool all_finite(std::span<const double> xs);

}  // namespace frdct::mathutil
