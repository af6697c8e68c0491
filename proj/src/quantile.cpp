#include "frdct/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "frdct/errors.hpp"
#include "frdct/mathutil.hpp"

namespace frdct::quantile {

namespace {

double check_loss(double z, double u) { return z * (u - (z < 0.0 ? 1.0 : 0.0)); }

struct Problem {
  std::span<const double> t;
  std::span<const double> r;
  std::span<const double> w;
  double u;

  double objective(double a, double b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (w[i] > 0.0) s += w[i] * check_loss(t[i] - a - b * r[i], u);
    return s;
  }
};

// Exact minimizing intercept for fixed slope: weighted u-quantile of the
// partial residuals, smallest minimizer.
double best_intercept(const Problem& p, double b) {
  std::vector<double> z, w;
  z.reserve(p.t.size());
  w.reserve(p.t.size());
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (p.w[i] > 0.0) {
      z.push_back(p.t[i] - b * p.r[i]);
      w.push_back(p.w[i]);
    }
  }
  return mathutil::weighted_quantile(z, w, p.u);
}

// Exact minimizing slope for fixed intercept: breakpoint walk over
// b = (t_i - a)/r_i. Returns the current slope when r has no spread.
double best_slope(const Problem& p, double a, double b_current) {
  struct Bp {
    double b;
    double jump;
  };
  std::vector<Bp> bps;
  double slope0 = 0.0;  // derivative of the objective in b below all breakpoints
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (p.w[i] <= 0.0) continue;
    double ri = p.r[i];
    if (ri == 0.0) continue;
    if (ri > 0.0)
      slope0 += -p.w[i] * ri * p.u;
    else
      slope0 += -p.w[i] * ri * (p.u - 1.0);
    bps.push_back({(p.t[i] - a) / ri, p.w[i] * std::abs(ri)});
  }
  if (bps.empty()) return b_current;
  std::sort(bps.begin(), bps.end(),
            [](const Bp& x, const Bp& y) { return x.b < y.b; });
  double slope = slope0;
  for (const Bp& bp : bps) {
    double next = slope + bp.jump;
    if (slope < 0.0 && next >= 0.0) return bp.b;
    slope = next;
  }
  return bps.back().b;
}

// Checks that 0 lies in the subdifferential at (a,b). Zero-residual points
// get multipliers in [u-1, u] fitted by projected least squares.
bool certify(const Problem& p, double a, double b) {
  double t_scale = 1.0;
  for (double ti : p.t) t_scale = std::max(t_scale, std::abs(ti));
  const double tau = 1e-8 * t_scale;
  double g1 = 0.0, g2 = 0.0;
  std::vector<std::size_t> zero;
  double w_total = 0.0, r_scale = 1.0;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (p.w[i] <= 0.0) continue;
    w_total += p.w[i];
    r_scale = std::max(r_scale, std::abs(p.r[i]));
    double z = p.t[i] - a - b * p.r[i];
    if (z > tau) {
      g1 += p.w[i] * p.u;
      g2 += p.w[i] * p.u * p.r[i];
    } else if (z < -tau) {
      g1 += p.w[i] * (p.u - 1.0);
      g2 += p.w[i] * (p.u - 1.0) * p.r[i];
    } else {
      zero.push_back(i);
    }
  }
  // Need sum_{i in zero} w_i xi_i (1, r_i) = (g1, g2), xi_i in [u-1, u].
  const double tol = 1e-7 * w_total * r_scale;
  if (zero.empty()) return std::abs(g1) <= tol && std::abs(g2) <= tol;
  std::vector<double> xi(zero.size(), p.u - 0.5);
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t k = 0; k < zero.size(); ++k) {
      std::size_t i = zero[k];
      double wi = p.w[i], ri = p.r[i];
      double res1 = g1, res2 = g2;
      for (std::size_t m = 0; m < zero.size(); ++m) {
        if (m == k) continue;
        res1 -= p.w[zero[m]] * xi[m];
        res2 -= p.w[zero[m]] * xi[m] * p.r[zero[m]];
      }
      double denom = wi * wi * (1.0 + ri * ri);
      double step = wi * (res1 + ri * res2) / denom;
      xi[k] = std::clamp(step, p.u - 1.0, p.u);
    }
  }
  double res1 = g1, res2 = g2;
  for (std::size_t m = 0; m < zero.size(); ++m) {
    res1 -= p.w[zero[m]] * xi[m];
    res2 -= p.w[zero[m]] * xi[m] * p.r[zero[m]];
  }
  return std::abs(res1) <= tol && std::abs(res2) <= tol;
}

// Candidate vertices interpolating pairs of near-active points; strictly
// improving jumps escape coordinate-descent stalls.
bool vertex_escape(const Problem& p, double& a, double& b, double& best,
                   std::size_t max_points) {
  std::vector<std::pair<double, std::size_t>> by_res;
  for (std::size_t i = 0; i < p.t.size(); ++i)
    if (p.w[i] > 0.0)
      by_res.emplace_back(std::abs(p.t[i] - a - b * p.r[i]), i);
  std::sort(by_res.begin(), by_res.end());
  std::size_t m = std::min(max_points, by_res.size());
  bool improved = false;
  for (std::size_t ii = 0; ii < m; ++ii) {
    for (std::size_t jj = ii + 1; jj < m; ++jj) {
      std::size_t i = by_res[ii].second, j = by_res[jj].second;
      double dr = p.r[i] - p.r[j];
      if (std::abs(dr) < 1e-12) continue;
      double bc = (p.t[i] - p.t[j]) / dr;
      double ac = p.t[i] - bc * p.r[i];
      double f = p.objective(ac, bc);
      if (f < best - 1e-13 * (1.0 + std::abs(best))) {
        best = f;
        a = ac;
        b = bc;
        improved = true;
      }
    }
  }
  return improved;
}

}  // namespace

LinearQuantileFit weighted_linear_quantile(std::span<const double> t,
                                           std::span<const double> r_centered,
                                           std::span<const double> weights,
                                           double u) {
  if (t.size() != r_centered.size() || t.size() != weights.size())
    throw InvalidInputError("weighted_linear_quantile: size mismatch");
  if (!(u > 0.0 && u < 1.0))
    throw InvalidInputError("weighted_linear_quantile: u must lie in (0,1)");
  std::size_t positive = 0;
  for (double w : weights) {
    if (w < 0.0)
      throw InvalidInputError("weighted_linear_quantile: negative weight");
    if (w > 0.0) ++positive;
  }
  if (positive < 3)
    throw EstimationError(
        "weighted_linear_quantile: fewer than 3 observations with positive "
        "weight");

  Problem p{t, r_centered, weights, u};

  // Degenerate design: no spread in r among the weighted points.
  double r_lo = std::numeric_limits<double>::infinity(), r_hi = -r_lo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (weights[i] > 0.0) {
      r_lo = std::min(r_lo, r_centered[i]);
      r_hi = std::max(r_hi, r_centered[i]);
    }
  }
  LinearQuantileFit fit;
  if (r_hi - r_lo < 1e-12) {
    fit.slope = 0.0;
    fit.intercept = best_intercept(p, 0.0);
    fit.objective = p.objective(fit.intercept, 0.0);
    fit.certified = certify(p, fit.intercept, 0.0);
    return fit;
  }

  double b = 0.0;
  double a = best_intercept(p, b);
  double best = p.objective(a, b);
  for (int iter = 0; iter < 200; ++iter) {
    double b_new = best_slope(p, a, b);
    double a_new = best_intercept(p, b_new);
    double f = p.objective(a_new, b_new);
    bool moved = f < best - 1e-13 * (1.0 + std::abs(best));
    if (moved) {
      a = a_new;
      b = b_new;
      best = f;
      continue;
    }
    if (!vertex_escape(p, a, b, best, 12)) break;
  }
  // Final polish from the located vertex.
  vertex_escape(p, a, b, best, 24);
  double a_pol = best_intercept(p, b);
  double f_pol = p.objective(a_pol, b);
  if (f_pol < best) {
    a = a_pol;
    best = f_pol;
  }

  fit.intercept = a;
  fit.slope = b;
  fit.objective = best;
  fit.certified = certify(p, a, b);
  if (!fit.certified) {
    // One wider escape round; the certificate is re-checked afterwards.
    vertex_escape(p, a, b, best, 48);
    fit.intercept = a;
    fit.slope = b;
    fit.objective = best;
    fit.certified = certify(p, a, b);
  }
  return fit;
}

std::size_t default_grid_size(std::size_t n_side, double b3) {
  double raw = 2.0 * std::cbrt(static_cast<double>(n_side) * b3);
  return std::max<std::size_t>(40, static_cast<std::size_t>(std::ceil(raw)));
}

QuantileCurve fit_quantile_process(const model::ObservationSample& sample,
                                   CutoffSide side, double b3,
                                   std::size_t grid_size,
                                   const kernels::KernelSpec& k_fs) {
  sample.validate();
  if (!(b3 > 0.0)) throw InvalidInputError("fit_quantile_process: b3 must be positive");
  if (grid_size < 5)
    throw InvalidInputError("fit_quantile_process: grid_size must be >= 5");

  std::vector<double> t_loc, r_loc, w_loc;
  double t_min = std::numeric_limits<double>::infinity(), t_max = -t_min;
  std::size_t n_local = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    bool is_below = sample.below(i);
    if ((side == CutoffSide::below) != is_below) continue;
    t_min = std::min(t_min, sample.t[i]);
    t_max = std::max(t_max, sample.t[i]);
    double x = (sample.r[i] - sample.cutoff) / b3;
    if (std::abs(x) <= 1.0) ++n_local;
    double w = kernels::eval_kernel(k_fs, x);
    if (w > 0.0) {
      t_loc.push_back(sample.t[i]);
      r_loc.push_back(sample.r[i] - sample.cutoff);
      w_loc.push_back(w);
    }
  }
  if (n_local < 20)
    throw EstimationError(
        "fit_quantile_process: fewer than 20 observations within the "
        "bandwidth on the requested side");

  QuantileCurve curve;
  curve.side = side;
  curve.bandwidth = b3;
  curve.endpoint_lo = t_min;
  curve.endpoint_hi = t_max;
  curve.grid_u.resize(grid_size);
  curve.values.resize(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    double u = static_cast<double>(j + 1) / static_cast<double>(grid_size + 1);
    curve.grid_u[j] = u;
    curve.values[j] =
        weighted_linear_quantile(t_loc, r_loc, w_loc, u).intercept;
  }
  return curve;
}

bool QuantileCurve::monotone() const {
  for (std::size_t j = 1; j < values.size(); ++j)
    if (values[j] < values[j - 1]) return false;
  return true;
}

QuantileCurve rearrange(const QuantileCurve& curve) {
  QuantileCurve out = curve;
  std::sort(out.values.begin(), out.values.end());
  return out;
}

QuantileCurve clip_to_endpoints(const QuantileCurve& curve) {
  QuantileCurve out = curve;
  for (double& v : out.values)
    v = std::clamp(v, curve.endpoint_lo, curve.endpoint_hi);
  return out;
}

double eval_quantile(const QuantileCurve& curve, double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw InvalidInputError("eval_quantile: u must lie in [0,1]");
  const auto& gu = curve.grid_u;
  const auto& v = curve.values;
  if (gu.empty()) throw InvalidInputError("eval_quantile: empty curve");
  if (u <= gu.front()) {
    double w = u / gu.front();
    return (1.0 - w) * curve.endpoint_lo + w * v.front();
  }
  if (u >= gu.back()) {
    double span = 1.0 - gu.back();
    double w = (span > 0.0) ? (u - gu.back()) / span : 1.0;
    return (1.0 - w) * v.back() + w * curve.endpoint_hi;
  }
  auto it = std::upper_bound(gu.begin(), gu.end(), u);
  std::size_t j = static_cast<std::size_t>(it - gu.begin());
  double w = (u - gu[j - 1]) / (gu[j] - gu[j - 1]);
  return (1.0 - w) * v[j - 1] + w * v[j];
}

namespace {

// Lower preimage of the piecewise-linear curve at level x, clipped to [0,1].
double invert_monotone(const QuantileCurve& curve, double x) {
  std::vector<double> knots_u, knots_v;
  knots_u.reserve(curve.grid_u.size() + 2);
  knots_v.reserve(curve.grid_u.size() + 2);
  knots_u.push_back(0.0);
  knots_v.push_back(curve.endpoint_lo);
  for (std::size_t j = 0; j < curve.grid_u.size(); ++j) {
    knots_u.push_back(curve.grid_u[j]);
    knots_v.push_back(curve.values[j]);
  }
  knots_u.push_back(1.0);
  knots_v.push_back(curve.endpoint_hi);

  if (x <= knots_v.front()) return 0.0;
  if (x > knots_v.back()) return 1.0;
  // First segment [j, j+1] whose upper value reaches x.
  for (std::size_t j = 0; j + 1 < knots_v.size(); ++j) {
    if (knots_v[j + 1] >= x) {
      double dv = knots_v[j + 1] - knots_v[j];
      if (dv <= 0.0) return knots_u[j + 1];  // flat segment, x == both ends
      double w = (x - knots_v[j]) / dv;
      return knots_u[j] + w * (knots_u[j + 1] - knots_u[j]);
    }
  }
  return 1.0;
}

}  // namespace

std::vector<double> conditional_rank(const model::ObservationSample& sample,
                                     const QuantileCurve& below,
                                     const QuantileCurve& above) {
  if (!below.monotone() || !above.monotone())
    throw InvalidInputError(
        "conditional_rank: curves must be monotone (apply rearrange first)");
  std::vector<double> ranks(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const QuantileCurve& c = sample.below(i) ? below : above;
    ranks[i] = invert_monotone(c, sample.t[i]);
  }
  return ranks;
}

SupportEstimate estimate_support(const model::ObservationSample& sample,
                                 double b3) {
  sample.validate();
  SupportEstimate out;
  for (CutoffSide side : {CutoffSide::below, CutoffSide::above}) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t n_local = 0;
    double lo_all = lo, hi_all = hi;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if ((side == CutoffSide::below) != sample.below(i)) continue;
      lo_all = std::min(lo_all, sample.t[i]);
      hi_all = std::max(hi_all, sample.t[i]);
      if (std::abs(sample.r[i] - sample.cutoff) <= b3) {
        lo = std::min(lo, sample.t[i]);
        hi = std::max(hi, sample.t[i]);
        ++n_local;
      }
    }
    bool fallback = n_local < 20;
    model::Interval iv = fallback ? model::Interval{lo_all, hi_all}
                                  : model::Interval{lo, hi};
    if (!std::isfinite(iv.lo))
      throw EstimationError("estimate_support: a side of the cutoff is empty");
    if (side == CutoffSide::below) {
      out.below = iv;
      out.below_fallback = fallback;
    } else {
      out.above = iv;
      out.above_fallback = fallback;
    }
  }
  out.overlap.lo = std::max(out.below.lo, out.above.lo);
  out.overlap.hi = std::min(out.below.hi, out.above.hi);
  out.overlap_nonempty = out.overlap.lo <= out.overlap.hi;
  if (!out.overlap_nonempty) out.overlap = {0.0, 0.0};
  return out;
}

}  // namespace frdct::quantile
