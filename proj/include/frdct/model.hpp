#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace frdct::model {

// The (Y, T, R) observations together with the cutoff of the running
// variable. Immutable after construction; validate() enforces the basic
// sanity requirements (equal lengths, finite values, data on both sides).
struct ObservationSample {
  std::vector<double> y;
  std::vector<double> t;
  std::vector<double> r;
  double cutoff = 0.0;

  std::size_t size() const { return y.size(); }
  bool below(std::size_t i) const { return r[i] < cutoff; }
  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

// A parametric family gamma -> g_gamma(t, e) of candidate structural
// functions at the cutoff, supplied as a bundle of callables with analytic
// derivatives. Families must be strictly increasing in e on the working
// region and satisfy the scale normalization g_gamma(t_norm, e) = e.
struct StructuralFamily {
  int dim = 0;
  std::string name;
  double normalization_point = 0.0;
  std::vector<double> box_lo;
  std::vector<double> box_hi;

  std::function<double(std::span<const double> gamma, double t, double e)> eval;
  std::function<void(std::span<const double> gamma, double t, double e,
                     std::span<double> out)>
      grad_gamma;
  std::function<double(std::span<const double> gamma, double t, double e)> dt;
  std::function<double(std::span<const double> gamma, double t, double e)> de;

  bool in_box(std::span<const double> gamma) const;
};

// Example-style quadratic interaction family
//   g(t, e) = g1 (t - tn) + g2 (t - tn)^2 + g3 (t - tn) e + e,
// monotone in e wherever g3 (t - tn) + 1 > 0.
StructuralFamily make_quadratic_interaction_family(
    double normalization_point, double box_halfwidth = 5.0);

// Quadratic family with the square centered at the origin instead of the
// normalization point:
//   g(t, e) = g1 (t - tn) + g2 (t^2 - tn^2) + g3 (t - tn) e + e.
// Shares the normalization and monotone region with the interaction family;
// the two differ by the reparametrization g1 -> g1 + g2 (t + tn) terms.
StructuralFamily make_centered_quadratic_family(double normalization_point,
                                                double box_halfwidth = 5.0);

// One-parameter linear family g(t, e) = g1 (t - tn) + e.
StructuralFamily make_linear_family(double normalization_point,
                                    double box_halfwidth = 5.0);

double eval_structural(const StructuralFamily& family,
                       std::span<const double> gamma, double t, double e);

// d g / d t at (gamma, t, e).
double marginal_effect(const StructuralFamily& family,
                       std::span<const double> gamma, double t, double e);

// Solves g_gamma(t, e) = y for e on e_bracket by safeguarded root finding;
// |g - y| <= 1e-10 at the solution. Throws if y is outside the bracket image
// or the family is not increasing on the bracket.
double invert_in_error(const StructuralFamily& family,
                       std::span<const double> gamma, double t, double y,
                       Interval e_bracket);

// True iff dg/de > 0 at every node of a 50x50 grid over t_range x e_range.
bool validate_monotonicity(const StructuralFamily& family,
                           std::span<const double> gamma, Interval t_range,
                           Interval e_range);

}  // namespace frdct::model
