#include "frdct/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "frdct/errors.hpp"
#include "frdct/mathutil.hpp"

namespace frdct::kernels {

namespace {

double base_eval(Kind kind, double x) {
  double ax = std::abs(x);
  if (ax > 1.0) return 0.0;
  switch (kind) {
    case Kind::cubic_smooth:
      return 2.0 * ax * ax * ax - 3.0 * x * x + 1.0;
    case Kind::triangular:
      return 1.0 - ax;
    case Kind::epanechnikov:
      return 0.75 * (1.0 - x * x);
  }
  return 0.0;
}

// Antiderivative of the two-sided kernel from -1 to x, closed form.
double base_integral(Kind kind, double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (kind) {
    case Kind::cubic_smooth: {
      if (x < 0.0) {
        // int_{-1}^{x} (-2v^3 - 3v^2 + 1) dv
        return -0.5 * x * x * x * x - x * x * x + x + 0.5;
      }
      // 0.5 + int_0^x (2v^3 - 3v^2 + 1) dv
      return 0.5 + 0.5 * x * x * x * x - x * x * x + x;
    }
    case Kind::triangular: {
      if (x < 0.0) return 0.5 * (1.0 + x) * (1.0 + x);
      return 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
    }
    case Kind::epanechnikov:
      return 0.25 * (2.0 + 3.0 * x - x * x * x);
  }
  return 0.0;
}

bool on_side(Side side, double x) {
  switch (side) {
    case Side::two_sided:
      return true;
    case Side::left_only:
      return x < 0.0;
    case Side::right_only:
      return x >= 0.0;
  }
  return true;
}

std::mutex cache_mutex;

}  // namespace

double eval_kernel(const KernelSpec& spec, double x) {
  if (!std::isfinite(x)) throw InvalidInputError("eval_kernel: non-finite x");
  if (!on_side(spec.side, x)) return 0.0;
  return base_eval(spec.kind, x);
}

double integrated_kernel(const KernelSpec& spec, double x) {
  if (!std::isfinite(x)) {
    if (std::isnan(x)) throw InvalidInputError("integrated_kernel: NaN x");
    x = (x > 0.0) ? 2.0 : -2.0;
  }
  switch (spec.side) {
    case Side::two_sided:
      return base_integral(spec.kind, x);
    case Side::left_only:
      return base_integral(spec.kind, std::min(x, 0.0));
    case Side::right_only:
      return (x < 0.0) ? 0.0 : base_integral(spec.kind, x) - 0.5;
  }
  return 0.0;
}

Eigen::Matrix3d kernel_moment_matrix(const KernelSpec& spec_t,
                                     const KernelSpec& spec_r, Side side) {
  using Key = std::tuple<int, int, int, int, int>;
  static std::map<Key, Eigen::Matrix3d> cache;
  Key key{static_cast<int>(spec_t.kind), static_cast<int>(spec_t.side),
          static_cast<int>(spec_r.kind), static_cast<int>(spec_r.side),
          static_cast<int>(side)};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  // The integrand k_T(x1) k_R(x2) 1{x2 in side} is separable, so the 2-D
  // quadrature reduces to products of 1-D moments; they are still computed by
  // adaptive quadrature (tolerance 1e-8) rather than closed forms so that any
  // shipped kernel kind is handled uniformly.
  auto mom = [](const KernelSpec& s, Side restrict_side, int p) {
    return mathutil::integrate(
        [&](double x) {
          double v = eval_kernel(s, x);
          if (!on_side(restrict_side, x)) return 0.0;
          double xp = 1.0;
          for (int i = 0; i < p; ++i) xp *= x;
          return xp * v;
        },
        -1.0, 1.0, 1e-9);
  };
  double t0 = mom(spec_t, Side::two_sided, 0);
  double t1 = mom(spec_t, Side::two_sided, 1);
  double t2 = mom(spec_t, Side::two_sided, 2);
  double r0 = mom(spec_r, side, 0);
  double r1 = mom(spec_r, side, 1);
  double r2 = mom(spec_r, side, 2);
  Eigen::Matrix3d m;
  m << t0 * r0, t1 * r0, t0 * r1,  //
      t1 * r0, t2 * r0, t1 * r1,   //
      t0 * r1, t1 * r1, t0 * r2;
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, m);
  return m;
}

Eigen::Matrix2d quantile_moment_matrix(const KernelSpec& spec, Side side) {
  using Key = std::tuple<int, int, int>;
  static std::map<Key, Eigen::Matrix2d> cache;
  Key key{static_cast<int>(spec.kind), static_cast<int>(spec.side),
          static_cast<int>(side)};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto mom = [&](int p) {
    return mathutil::integrate(
        [&](double x) {
          if (!on_side(side, x)) return 0.0;
          double v = eval_kernel(spec, x);
          double xp = 1.0;
          for (int i = 0; i < p; ++i) xp *= x;
          return xp * v;
        },
        -1.0, 1.0, 1e-9);
  };
  Eigen::Matrix2d m;
  double m0 = mom(0), m1 = mom(1), m2 = mom(2);
  m << m0, m1, m1, m2;
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, m);
  return m;
}

double one_sided_equivalent_kernel(const KernelSpec& spec, Side side,
                                   double x) {
  if (!on_side(side, x)) return 0.0;
  double k = eval_kernel(spec, x);
  if (k == 0.0) return 0.0;
  Eigen::Matrix2d omega = quantile_moment_matrix(spec, side);
  Eigen::Vector2d rhs(1.0, x);
  Eigen::Vector2d w = omega.ldlt().solve(Eigen::Vector2d(1.0, 0.0));
  return w.dot(rhs) * k;
}

void validate_kernel(const KernelSpec& spec) {
  double mass = 0.0;
  const int n = 201;
  for (int i = 0; i < n; ++i) {
    double x = -1.0 + 2.0 * i / (n - 1);
    double v = eval_kernel(spec, x);
    if (v < 0.0)
      throw InvalidInputError("validate_kernel: kernel negative inside support");
    mass += v;
  }
  if (mass <= 0.0)
    throw InvalidInputError("validate_kernel: kernel has no mass on its side");
  for (double x : {-1.5, 1.5, -2.0, 2.0}) {
    if (eval_kernel(spec, x) != 0.0)
      throw InvalidInputError("validate_kernel: kernel nonzero outside [-1,1]");
  }
}

}  // namespace frdct::kernels
