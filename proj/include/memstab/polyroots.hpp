#pragma once

#include "memstab/types.hpp"

#include <vector>

namespace memstab {

/// Horner evaluation of sum_i coeffs[i] x^i.
template <typename Scalar>
std::complex<Scalar> poly_eval(const Vector<Scalar>& coeffs,
                               std::complex<Scalar> x) {
  std::complex<Scalar> acc(0, 0);
  for (Eigen::Index i = coeffs.size() - 1; i >= 0; --i) acc = acc * x + coeffs[i];
  return acc;
}

Complex poly_eval(const VectorXd& coeffs, Complex x);
Complex poly_derivative_eval(const VectorXd& coeffs, Complex x);

/// All complex roots of a real polynomial given in ascending coefficient
/// order. Companion-matrix eigenvalues followed by Newton polishing; each
/// root r satisfies |p(r)| <= tol * (1 + |r|)^degree or a ConvergenceError
/// carrying the worst residual is thrown. Exact zero trailing coefficients
/// are deflated, so those roots come out as exact zeros.
VectorXcd poly_roots(const VectorXd& coeffs, double tol = kDefaultRootTol);

/// Real roots in (min_value, max_value] extracted from poly_roots: imaginary
/// part below imag_tol * (1 + |root|), clustered duplicates merged within
/// cluster_tol.
std::vector<double> real_roots_in(const VectorXd& coeffs, double min_value,
                                  double max_value, double imag_tol = 1e-7,
                                  double cluster_tol = 1e-6,
                                  double tol = kDefaultRootTol);

/// Coefficients of the product of two ascending-order polynomials.
VectorXd poly_mul(const VectorXd& a, const VectorXd& b);

/// Coefficients of (1 + x)^n, ascending.
VectorXd one_plus_x_pow(int n);

/// Binomial coefficient as a Scalar; exact for the small arguments used here.
template <typename Scalar = double>
Scalar binomial(int n, int r) {
  if (r < 0 || r > n) return Scalar(0);
  Scalar value(1);
  for (int i = 0; i < r; ++i) value = value * Scalar(n - i) / Scalar(i + 1);
  return value;
}

}  // namespace memstab
