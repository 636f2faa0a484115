#pragma once

#include "memstab/types.hpp"

#include <cmath>

namespace memstab {

/// Gamma density with integer shape j >= 1 and scale tau > 0, evaluated at
/// t >= 0:  t^{j-1} e^{-t/tau} / ((j-1)! tau^j).
template <typename Scalar>
Scalar gamma_density(int shape, Scalar tau, Scalar t) {
  if (shape < 1) throw DomainError("gamma_density: shape must be >= 1");
  if (!(tau > Scalar(0))) throw DomainError("gamma_density: tau must be positive");
  if (t < Scalar(0)) throw DomainError("gamma_density: t must be non-negative");
  Scalar factorial = Scalar(1);  // (j-1)!, iterative; shapes stay small
  for (int m = 2; m < shape; ++m) factorial *= Scalar(m);
  Scalar power = Scalar(1);  // (t/tau)^{j-1}
  for (int m = 1; m < shape; ++m) power *= t / tau;
  using std::exp;
  return power * exp(-t / tau) / (factorial * tau);
}

double eval_gamma(int shape, double tau, double t);

/// Kernel value sum_j theta_j g(t; j, tau).
double eval_kernel(const KernelSpec& spec, double t);

/// Integral of the kernel over [0, inf). Exact: each Gamma density has unit
/// mass, so this is just the sum of the weights.
double total_mass(const KernelSpec& spec);

/// Monotonicity region in the (eta2, eta3) plane for k = 2 kernels: the
/// closed set where g' <= 0 on (0, inf). Union of a wedge and a disc inside
/// the strip 0 <= eta2 <= 1.
bool in_region_m(double eta2, double eta3);

/// Convexity region for k = 2 kernels: the closed set where g'' >= 0 on
/// (0, inf).
bool in_region_c(double eta2, double eta3);

struct ShapeReport {
  bool monotone_decreasing;
  bool convex;
};

/// Qualitative shape of a k = 2, unit-scale kernel. Boundary points count as
/// inside (the regions are closed).
ShapeReport classify_shape_k2(const KernelSpec& spec);

}  // namespace memstab
