#include "frdct/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "frdct/errors.hpp"

namespace frdct::mathutil {

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidInputError("normal_quantile: p must lie in [0,1]");
  }
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement against the exact CDF.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

namespace {

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, cc = 1.0 / tiny, dd = 1.0 / b, h = dd;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    dd = an * dd + b;
    if (std::abs(dd) < tiny) dd = tiny;
    cc = b + an / cc;
    if (std::abs(cc) < tiny) cc = tiny;
    dd = 1.0 / dd;
    double del = dd * cc;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw InvalidInputError("gamma_p: invalid arguments");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw InvalidInputError("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_sf(double x, int dof) {
  if (dof <= 0) throw InvalidInputError("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double beta_inc(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw InvalidInputError("beta_inc: a,b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Continued fraction (Lentz), using the symmetry relation for stability.
  auto cf = [](double a_, double b_, double x_) {
    const double tiny = 1e-300;
    double qab = a_ + b_, qap = a_ + 1.0, qam = a_ - 1.0;
    double cc = 1.0, dd = 1.0 - qab * x_ / qap;
    if (std::abs(dd) < tiny) dd = tiny;
    dd = 1.0 / dd;
    double h = dd;
    for (int m = 1; m <= 500; ++m) {
      int m2 = 2 * m;
      double aa = m * (b_ - m) * x_ / ((qam + m2) * (a_ + m2));
      dd = 1.0 + aa * dd;
      if (std::abs(dd) < tiny) dd = tiny;
      cc = 1.0 + aa / cc;
      if (std::abs(cc) < tiny) cc = tiny;
      dd = 1.0 / dd;
      h *= dd * cc;
      aa = -(a_ + m) * (qab + m) * x_ / ((a_ + m2) * (qap + m2));
      dd = 1.0 + aa * dd;
      if (std::abs(dd) < tiny) dd = tiny;
      cc = 1.0 + aa / cc;
      if (std::abs(cc) < tiny) cc = tiny;
      dd = 1.0 / dd;
      double del = dd * cc;
      h *= del;
      if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
  };
  double lfront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                  a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(lfront) * cf(a, b, x) / a;
  }
  return 1.0 - std::exp(lfront) * cf(b, a, 1.0 - x) / b;
}

double beta_quantile(double p, double a, double b) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidInputError("beta_quantile: p must lie in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  double x = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    double f = beta_inc(a, b, x) - p;
    if (std::abs(f) < 1e-14) break;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    // Newton step with density; fall back to bisection if it leaves the
    // bracket or the density underflows.
    double lpdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) +
                  std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double pdf = std::exp(lpdf);
    double xn = (pdf > 1e-300) ? x - f / pdf : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-15 * std::max(1.0, std::abs(x))) {
      x = xn;
      break;
    }
    x = xn;
    if (hi - lo < 1e-13) break;
  }
  return x;
}

double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double u) {
  if (values.size() != weights.size() || values.empty())
    throw InvalidInputError("weighted_quantile: size mismatch or empty input");
  if (!(u > 0.0 && u < 1.0))
    throw InvalidInputError("weighted_quantile: u must lie in (0,1)");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return values[i] < values[j] || (values[i] == values[j] && i < j);
  });
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InvalidInputError("weighted_quantile: negative weight");
    total += w;
  }
  if (total <= 0.0) throw InvalidInputError("weighted_quantile: zero total weight");
  double cum = 0.0;
  const double target = u * total;
  for (std::size_t k : order) {
    cum += weights[k];
    if (cum >= target - 1e-12 * total) return values[k];
  }
  return values[order.back()];
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

double integrate2d(const std::function<double(double, double)>& f, double ax,
                   double bx, double ay, double by, double tol) {
  auto outer = [&](double x) {
    return integrate([&](double y) { return f(x, y); }, ay, by, 0.1 * tol);
  };
  return integrate(outer, ax, bx, tol);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double f_tol, double x_tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw InvalidInputError("find_root: no sign change on the bracket");
  for (int iter = 0; iter < 200; ++iter) {
    // Secant proposal, safeguarded by the bracket.
    double x = (std::abs(fhi - flo) > 1e-300)
                   ? hi - fhi * (hi - lo) / (fhi - flo)
                   : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    double fx = f(x);
    if (std::abs(fx) <= f_tol || hi - lo <= x_tol) return x;
    if (flo * fx <= 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
  }
  return 0.5 * (lo + hi);
}

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace frdct::mathutil
