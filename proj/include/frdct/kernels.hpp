#pragma once

#include <Eigen/Dense>

namespace frdct::kernels {

// Kernel shapes supported on [-1,1]. cubic_smooth is 2|x|^3 - 3x^2 + 1, the
// even C^1 extension of 2x^3 - 3x^2 + 1 from [0,1]; it integrates to one and
// is strictly positive inside its support.
enum class Kind { cubic_smooth, triangular, epanechnikov };

// two_sided keeps the whole support; left_only multiplies by 1{x < 0},
// right_only by 1{x >= 0}.
enum class Side { two_sided, left_only, right_only };

struct KernelSpec {
  Kind kind = Kind::cubic_smooth;
  Side side = Side::two_sided;
};

double eval_kernel(const KernelSpec& spec, double x);

// Integral of the kernel from -infinity to x. For one-sided specs this is the
// integral of the restricted (not renormalized) kernel.
double integrated_kernel(const KernelSpec& spec, double x);

// 3x3 matrix of moments int (1,x1,x2)(1,x1,x2)' k_T(x1) k_R(x2) 1{x2 in side}
// dx1 dx2, computed by adaptive quadrature to 1e-8 and cached. The side
// restriction applies to x2 only.
Eigen::Matrix3d kernel_moment_matrix(const KernelSpec& spec_t,
                                     const KernelSpec& spec_r, Side side);

// 2x2 one-dimensional analogue int (1,x)(1,x)' k(x) 1{x in side} dx; this is
// the moment matrix of a one-sided local linear fit (the Omega_Q matrices of
// the first-step quantile theory). Cached.
Eigen::Matrix2d quantile_moment_matrix(const KernelSpec& spec, Side side);

// Boundary-corrected equivalent kernel iota' Omega_side^{-1} (1,x)' k(x) on
// the chosen half-line: has unit mass and zero first moment over the side.
double one_sided_equivalent_kernel(const KernelSpec& spec, Side side, double x);

// Validates that a kernel spec satisfies the estimation requirements on a
// grid: nonnegative on [-1,1], zero outside, positive total mass. Throws
// InvalidInputError with a description otherwise.
void validate_kernel(const KernelSpec& spec);

}  // namespace frdct::kernels
