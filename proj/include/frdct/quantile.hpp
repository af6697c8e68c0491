#pragma once

#include <span>
#include <vector>

#include "frdct/kernels.hpp"
#include "frdct/model.hpp"

namespace frdct::quantile {

enum class CutoffSide { below, above };

// Estimated conditional quantile process of T given R at the cutoff, on one
// side. Values sit on an equally spaced interior grid u_1 < ... < u_J in
// (0,1); evaluation attaches the side sample minimum at u = 0 and maximum at
// u = 1 and interpolates linearly in between.
struct QuantileCurve {
  CutoffSide side = CutoffSide::below;
  std::vector<double> grid_u;
  std::vector<double> values;
  double endpoint_lo = 0.0;
  double endpoint_hi = 0.0;
  double bandwidth = 0.0;

  bool monotone() const;
};

struct SupportEstimate {
  model::Interval below;
  model::Interval above;
  model::Interval overlap;
  bool overlap_nonempty = false;
  // Set when a side had fewer than 20 local observations and the whole side
  // sample was used instead.
  bool below_fallback = false;
  bool above_fallback = false;
};

struct LinearQuantileFit {
  double intercept = 0.0;
  double slope = 0.0;
  double objective = 0.0;
  bool certified = false;  // subgradient optimality certificate passed
};

// Exact minimizer of sum_i w_i rho_u(t_i - a - b r_i) over (a, b), where
// rho_u(z) = z (u - 1{z<0}). The objective is piecewise-linear convex; the
// solver alternates exact one-dimensional minimizations with vertex polishing
// and verifies optimality through the subgradient condition. Ties are broken
// by the lower-quantile convention. Requires at least 3 strictly positive
// weights. A design with no spread in r returns the weighted quantile of t
// with zero slope.
LinearQuantileFit weighted_linear_quantile(std::span<const double> t,
                                           std::span<const double> r_centered,
                                           std::span<const double> weights,
                                           double u);

// First-step quantile process estimator: kernel-weighted linear quantile fits
// at u_j = j/(J+1), j = 1..grid_size, with weights k_fs((r - cutoff)/b3)
// restricted to one side of the cutoff. Requires at least 20 observations
// with |r - cutoff| <= b3 on that side.
QuantileCurve fit_quantile_process(const model::ObservationSample& sample,
                                   CutoffSide side, double b3,
                                   std::size_t grid_size,
                                   const kernels::KernelSpec& k_fs = {});

// Monotone (nondecreasing) rearrangement: sorts the grid values; the grid and
// endpoints are unchanged.
QuantileCurve rearrange(const QuantileCurve& curve);

// Clips the grid values into [endpoint_lo, endpoint_hi].
QuantileCurve clip_to_endpoints(const QuantileCurve& curve);

// Piecewise-linear evaluation through (0, lo), (u_j, v_j), (1, hi).
double eval_quantile(const QuantileCurve& curve, double u);

// Ranks U_i = curve_side^{-1}(T_i), clipped to [0,1]; flat segments map to
// their lower preimage. Both curves must be monotone.
std::vector<double> conditional_rank(const model::ObservationSample& sample,
                                     const QuantileCurve& below,
                                     const QuantileCurve& above);

// Per-side treatment support intervals from observations with |r - cutoff| <= b3
// (falling back to the whole side with a flag when fewer than 20) and their
// intersection.
SupportEstimate estimate_support(const model::ObservationSample& sample,
                                 double b3);

// Default interior grid size: max(40, ceil(2 (n_side b3)^{1/3})).
std::size_t default_grid_size(std::size_t n_side, double b3);

}  // namespace frdct::quantile
