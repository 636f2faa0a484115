#pragma once

#include "memstab/polyroots.hpp"
#include "memstab/types.hpp"

namespace memstab {

/// Dispersion polynomial of the local system,
///   p(lambda, mu) = lambda (lambda+1)^{k+1}
///                   - mu^2 sum_{j=1}^{k+1} theta_j (lambda+1)^{k+1-j},
/// equal to det(lambda A0 + mu A1 + B).
template <typename Scalar>
std::complex<Scalar> eval_p(const Vector<Scalar>& theta,
                            std::complex<Scalar> lambda,
                            std::complex<Scalar> mu) {
  const int k = static_cast<int>(theta.size()) - 1;
  const std::complex<Scalar> shifted = lambda + Scalar(1);
  std::complex<Scalar> weighted(0, 0);  // sum theta_j (lambda+1)^{k+1-j}, Horner in shifted
  for (int j = 1; j <= k + 1; ++j) weighted = weighted * shifted + theta[j - 1];
  std::complex<Scalar> principal = lambda;
  for (int j = 0; j < k + 1; ++j) principal *= shifted;
  return principal - mu * mu * weighted;
}

Complex eval_p(const KernelSpec& spec, Complex lambda, Complex mu);

/// Ascending lambda-coefficients of the (monic, degree k+2, real) polynomial
/// p(., i xi).
template <typename Scalar>
Vector<Scalar> dispersion_coefficients(const Vector<Scalar>& theta, Scalar xi) {
  const int k = static_cast<int>(theta.size()) - 1;
  Vector<Scalar> coeffs = Vector<Scalar>::Zero(k + 3);
  for (int m = 1; m <= k + 2; ++m) coeffs[m] = binomial<Scalar>(k + 1, m - 1);
  const Scalar xi2 = xi * xi;  // -mu^2 = xi^2 keeps everything real
  for (int j = 1; j <= k + 1; ++j)
    for (int m = 0; m <= k + 1 - j; ++m)
      coeffs[m] += xi2 * theta[j - 1] * binomial<Scalar>(k + 1 - j, m);
  return coeffs;
}

VectorXd dispersion_coefficients(const KernelSpec& spec, double xi);

/// Root multiset of p(., i xi); conjugation-symmetric within the residual
/// tolerance, degree k+2.
VectorXcd roots_at(const KernelSpec& spec, double xi,
                   double tol = kDefaultRootTol);

/// Temporal eigenvalue branches over a frequency grid. Branches are matched
/// between consecutive grid points by a globally minimal total pairing
/// distance; envelope is the per-frequency maximum real part.
struct Spectrum {
  VectorXd xi;
  std::vector<VectorXcd> branches;  // k+2 entries, each of length xi.size()
  VectorXd envelope;
};

Spectrum spectrum_on_grid(const KernelSpec& spec, const VectorXd& xi,
                          double tol = kDefaultRootTol);
Spectrum spectrum(const KernelSpec& spec, double xi_min, double xi_max,
                  int n_points, bool log_spacing,
                  double tol = kDefaultRootTol);

/// Logarithmic grid over [1e-3, 1e3] with 2000 points, zero prepended.
VectorXd default_xi_grid();
Spectrum default_spectrum(const KernelSpec& spec, double tol = kDefaultRootTol);

/// Effective diffusivity of the branch through zero: lambda_0(xi) =
/// -(sum_j theta_j) xi^2 + o(xi^2).
double slow_branch_diffusivity(const KernelSpec& spec);

/// Large-frequency behavior of the two wave-like branches:
/// lambda ~ +- i speed xi + damping.
struct FastBranchLimit {
  double speed;    // sqrt(theta_1)
  double damping;  // -(theta_1 - theta_2) / (2 theta_1)
};
FastBranchLimit fast_branch_limit(const KernelSpec& spec);

/// Large-frequency limits of the k intermediate branches: the roots of the
/// high-frequency polynomial Q (see stability.hpp).
VectorXcd slow_branch_limits(const KernelSpec& spec,
                             double tol = kDefaultRootTol);

/// Minimal-total-distance pairing: result[i] is the index into `next` matched
/// to prev[i]. Exact subset-DP assignment; sizes must match and stay small.
std::vector<int> min_cost_assignment(const VectorXcd& prev,
                                     const VectorXcd& next);

}  // namespace memstab
