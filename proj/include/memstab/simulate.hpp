#pragma once

#include "memstab/types.hpp"

#include <functional>
#include <vector>

namespace memstab {

/// State of a single spatial Fourier mode of the local system.
struct ModalState {
  double xi;
  VectorXcd w;  // length k+2: (u, psi_1, ..., psi_{k+1}) amplitudes
  double t;
};

/// Stored time series of one integration: sample times, |u| at those times,
/// the complex u at the final time, and the least-squares growth rate of
/// log|u| fitted over the trailing part of the run.
struct SimResult {
  VectorXd times;
  VectorXd amplitude;
  Complex final_u;
  double fitted_rate;
};

/// Classic fourth-order one-step integration of the mode ODE
///   dW/dt = -(i xi A0^{-1} A1 + A0^{-1} B) W.
/// Requires dt <= 0.5 / (sqrt(theta_1) |xi| + 1); throws NonFiniteError with
/// the blow-up time when an unstable mode overflows.
SimResult integrate_mode(const KernelSpec& spec, double xi,
                         const VectorXcd& w0, double t_end, double dt,
                         double fit_fraction = 0.5);

/// Independent route: integrates the scalar history equation
///   u'(t) = -xi^2 int_0^t g(t-s) u(s) ds
/// with zero history before t = 0, trapezoidal history quadrature and the
/// same one-step method. The history sums are evaluated through an
/// exponential-moment recursion that reproduces the direct trapezoid sums
/// exactly (up to rounding) at O(N) cost.
SimResult integrate_memory_quadrature(const KernelSpec& spec, double xi,
                                      Complex u0, double t_end, double dt,
                                      double fit_fraction = 0.5);

/// Full time series variant of integrate_mode; sample times are the same
/// uniform grid for every call with equal t_end and n_store.
struct ModalSeries {
  VectorXd times;
  VectorXcd u;
  VectorXcd w_final;
};

ModalSeries integrate_modal_series(const KernelSpec& spec, double xi,
                                   const VectorXcd& w0, double t_end,
                                   double dt, int n_store = 1025);

struct ModeRate {
  int n;
  double xi;
  double fitted_rate;
  double predicted_rate;  // max Re of the dispersion roots at xi
};

/// Spectral (exact-in-x) evolution on a periodic domain of the given length:
/// each discrete mode xi_n = 2 pi n / L evolves independently through
/// integrate_mode, starting from u = initial data and zero psi_j.
struct FieldSimulation {
  VectorXd x;
  VectorXd snapshot_times;
  MatrixXd field;  // snapshot_times.size() rows, x.size() columns
  std::vector<ModeRate> mode_rates;
};

/// dt <= 0 selects an automatic per-mode step within the stability bound.
FieldSimulation simulate_physical(const KernelSpec& spec, double domain_length,
                                  int n_modes,
                                  const std::function<double(double)>& initial_u,
                                  double t_end, double dt = 0.0,
                                  int n_snapshots = 9);

/// Least-squares slope of log(amplitude) over the trailing `fraction` of the
/// samples; zero-amplitude samples are skipped.
double fit_log_slope(const VectorXd& times, const VectorXd& amplitude,
                     double fraction);

}  // namespace memstab
