#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace memstab {

using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;
using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;

/// Invalid parameter values (negative time, non-positive scale, bad weights...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Operation only implemented for a specific kernel order (typically k = 2).
struct UnsupportedOrderError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The first-order system is not hyperbolic for the given weights.
struct HyperbolicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A root finder failed to meet its residual contract.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), worst_residual(residual) {}
  double worst_residual;
};

/// History window too short for the requested quadrature tail tolerance.
struct InsufficientHistoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time step violates the explicit integrator bound.
struct StepSizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Integration produced a non-finite value (typically a blown-up unstable mode).
struct NonFiniteError : std::runtime_error {
  NonFiniteError(const std::string& msg, double t)
      : std::runtime_error(msg), time(t) {}
  double time;
};

/// Memory kernel g(t) = sum_{j=1}^{k+1} theta_j g(t; j, tau), where g(.; j, tau)
/// is the Gamma density with integer shape j and scale tau.
///
/// Plain data; call validate() to enforce the invariants (theta has k+1
/// entries, theta_1 > 0, theta_j >= 0, tau > 0).
struct KernelSpec {
  int k = 0;
  VectorXd theta;
  double tau = 1.0;

  void validate() const;

  /// Weight theta_j, 1-based; zero for j past k+1 (so e.g. theta_at(2) is
  /// well-defined for k = 0).
  double theta_at(int j) const {
    return (j >= 1 && j <= k + 1) ? theta[j - 1] : 0.0;
  }

  /// Same weights with time measured in units of tau (scale normalized to 1).
  KernelSpec normalized() const { return KernelSpec{k, theta, 1.0}; }
};

KernelSpec make_spec(std::initializer_list<double> theta, double tau = 1.0);

/// Weight ratios eta_j = theta_j / theta_1 for j = 2..k+1.
struct EtaCoordinates {
  VectorXd eta;  // eta[i] = theta_{i+2} / theta_1

  double eta2() const { return eta.size() > 0 ? eta[0] : 0.0; }
  double eta3() const { return eta.size() > 1 ? eta[1] : 0.0; }
};

EtaCoordinates eta_coordinates(const KernelSpec& spec);

/// k = 2 spec with theta = theta1 * (1, eta2, eta3); the common
/// parameterization for the two-ratio stability plane.
KernelSpec spec_from_eta(double eta2, double eta3, double theta1 = 1.0);

/// Maps a time measured with scale tau to the unit-scale clock.
inline double rescale_time(double tau, double t) { return t / tau; }

/// Throws unless the spec is valid and already on the unit time scale.
void require_unit_scale(const KernelSpec& spec);

/// Default residual tolerance of the polynomial root finders. The CLI can
/// override it through the MEMSTAB_TOL environment variable.
inline constexpr double kDefaultRootTol = 1e-9;

}  // namespace memstab
