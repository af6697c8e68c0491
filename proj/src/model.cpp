#include "frdct/model.hpp"

#include <algorithm>
#include <cmath>

#include "frdct/errors.hpp"
#include "frdct/mathutil.hpp"

namespace frdct::model {

void ObservationSample::validate() const {
  if (y.empty() || y.size() != t.size() || y.size() != r.size())
    throw InvalidInputError(
        "sample: y, t, r must have equal positive length");
  if (!std::isfinite(cutoff))
    throw InvalidInputError("sample: cutoff must be finite");
  if (!mathutil::all_finite(y) || !mathutil::all_finite(t) ||
      !mathutil::all_finite(r))
    throw InvalidInputError("sample: all values must be finite");
  bool has_below = false, has_above = false;
  for (double ri : r) {
    (ri < cutoff ? has_below : has_above) = true;
    if (has_below && has_above) return;
  }
  throw InvalidInputError(
      "sample: need at least one observation on each side of the cutoff");
}

bool StructuralFamily::in_box(std::span<const double> gamma) const {
  if (static_cast<int>(gamma.size()) != dim) return false;
  for (int k = 0; k < dim; ++k)
    if (!(gamma[k] >= box_lo[k] && gamma[k] <= box_hi[k])) return false;
  return true;
}

namespace {

void check_args(const StructuralFamily& family, std::span<const double> gamma,
                double t, double e) {
  if (static_cast<int>(gamma.size()) != family.dim)
    throw InvalidInputError("family: parameter dimension mismatch");
  if (!mathutil::all_finite(gamma) || !std::isfinite(t) || !std::isfinite(e))
    throw InvalidInputError("family: non-finite inputs");
}

std::vector<double> uniform_box(int dim, double halfwidth) {
  return std::vector<double>(dim, halfwidth);
}

}  // namespace

StructuralFamily make_quadratic_interaction_family(double normalization_point,
                                                   double box_halfwidth) {
  StructuralFamily f;
  f.dim = 3;
  f.name = "quadratic";
  f.normalization_point = normalization_point;
  f.box_lo = {-box_halfwidth, -box_halfwidth, -box_halfwidth};
  f.box_hi = uniform_box(3, box_halfwidth);
  const double tn = normalization_point;
  f.eval = [tn](std::span<const double> g, double t, double e) {
    double d = t - tn;
    return g[0] * d + g[1] * d * d + g[2] * d * e + e;
  };
  f.grad_gamma = [tn](std::span<const double>, double t, double e,
                      std::span<double> out) {
    double d = t - tn;
    out[0] = d;
    out[1] = d * d;
    out[2] = d * e;
  };
  f.dt = [tn](std::span<const double> g, double t, double e) {
    double d = t - tn;
    return g[0] + 2.0 * g[1] * d + g[2] * e;
  };
  f.de = [tn](std::span<const double> g, double t, double) {
    return g[2] * (t - tn) + 1.0;
  };
  return f;
}

StructuralFamily make_centered_quadratic_family(double normalization_point,
                                                double box_halfwidth) {
  StructuralFamily f;
  f.dim = 3;
  f.name = "quadratic-origin";
  f.normalization_point = normalization_point;
  f.box_lo = {-box_halfwidth, -box_halfwidth, -box_halfwidth};
  f.box_hi = uniform_box(3, box_halfwidth);
  const double tn = normalization_point;
  f.eval = [tn](std::span<const double> g, double t, double e) {
    return g[0] * (t - tn) + g[1] * (t * t - tn * tn) + g[2] * (t - tn) * e + e;
  };
  f.grad_gamma = [tn](std::span<const double>, double t, double e,
                      std::span<double> out) {
    out[0] = t - tn;
    out[1] = t * t - tn * tn;
    out[2] = (t - tn) * e;
  };
  f.dt = [tn](std::span<const double> g, double t, double e) {
    return g[0] + 2.0 * g[1] * t + g[2] * e;
  };
  f.de = [tn](std::span<const double> g, double t, double) {
    return g[2] * (t - tn) + 1.0;
  };
  return f;
}

StructuralFamily make_linear_family(double normalization_point,
                                    double box_halfwidth) {
  StructuralFamily f;
  f.dim = 1;
  f.name = "linear";
  f.normalization_point = normalization_point;
  f.box_lo = {-box_halfwidth};
  f.box_hi = {box_halfwidth};
  const double tn = normalization_point;
  f.eval = [tn](std::span<const double> g, double t, double e) {
    return g[0] * (t - tn) + e;
  };
  f.grad_gamma = [tn](std::span<const double>, double t, double,
                      std::span<double> out) { out[0] = t - tn; };
  f.dt = [](std::span<const double> g, double, double) { return g[0]; };
  f.de = [](std::span<const double>, double, double) { return 1.0; };
  return f;
}

double eval_structural(const StructuralFamily& family,
                       std::span<const double> gamma, double t, double e) {
  check_args(family, gamma, t, e);
  return family.eval(gamma, t, e);
}

double marginal_effect(const StructuralFamily& family,
                       std::span<const double> gamma, double t, double e) {
  check_args(family, gamma, t, e);
  return family.dt(gamma, t, e);
}

double invert_in_error(const StructuralFamily& family,
                       std::span<const double> gamma, double t, double y,
                       Interval e_bracket) {
  check_args(family, gamma, t, 0.0);
  if (!std::isfinite(y) || e_bracket.lo >= e_bracket.hi)
    throw InvalidInputError("invert_in_error: bad target or bracket");
  double g_lo = family.eval(gamma, t, e_bracket.lo);
  double g_hi = family.eval(gamma, t, e_bracket.hi);
  if (g_lo >= g_hi)
    throw InvalidInputError(
        "invert_in_error: family not increasing on the bracket");
  if (y < g_lo - 1e-12 || y > g_hi + 1e-12)
    throw InvalidInputError("invert_in_error: y outside the bracket image");
  if (y <= g_lo) return e_bracket.lo;
  if (y >= g_hi) return e_bracket.hi;
  return mathutil::find_root(
      [&](double e) { return family.eval(gamma, t, e) - y; }, e_bracket.lo,
      e_bracket.hi, 1e-10, 1e-14);
}

bool validate_monotonicity(const StructuralFamily& family,
                           std::span<const double> gamma, Interval t_range,
                           Interval e_range) {
  if (static_cast<int>(gamma.size()) != family.dim)
    throw InvalidInputError("family: parameter dimension mismatch");
  const int grid = 50;
  for (int i = 0; i < grid; ++i) {
    double t = t_range.lo + (t_range.hi - t_range.lo) * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      double e = e_range.lo + (e_range.hi - e_range.lo) * j / (grid - 1);
      if (!(family.de(gamma, t, e) > 0.0)) return false;
    }
  }
  return true;
}

}  // namespace frdct::model
