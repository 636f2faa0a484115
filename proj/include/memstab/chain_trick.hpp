#pragma once

#include "memstab/types.hpp"

#include <functional>

namespace memstab {

/// Matrices of the local first-order system A0 W_t + A1 W_x + B W = 0 that is
/// equivalent to the non-local heat flux law, with state
/// W = (u, psi_1, ..., psi_{k+1}).
struct SystemMatrices {
  MatrixXd a0;  // identity
  MatrixXd a1;  // row 1 carries the weights, entry (2,1) = 1
  MatrixXd b;   // diag(0, 1, ..., 1) with -1 couplings on the lower diagonal
};

SystemMatrices build_system(const KernelSpec& spec);

/// Eigenstructure of A0^{-1} A1: two simple wave speeds +-sqrt(theta_1) and a
/// zero eigenvalue of multiplicity k. Eigenvectors use the explicit
/// (non-normalized) choice that diagonalizes the principal part.
struct EigenStructure {
  double speed;                // sqrt(theta_1)
  int zero_multiplicity;       // k
  VectorXd eigenvalues;        // (-speed, +speed, 0, ..., 0)
  MatrixXd eigenvectors;       // columns, same order as eigenvalues
};

EigenStructure eigen_structure(const SystemMatrices& m, const KernelSpec& spec);

/// Tail mass of the shape-j unit-scale Gamma density beyond t.
double gamma_tail_mass(int shape, double t);

/// Convolution (T_j phi)(t) = int_{-inf}^t g_j(t-s) phi(s) ds approximated by
/// a composite trapezoid over [t - window, t] with the given step.
Complex history_convolve(int shape,
                         const std::function<Complex(double)>& phi, double t,
                         double window, double step);

/// How well the quadrature transforms T_j psi0 satisfy the cascade
/// d psi_j/dt = psi_{j-1} - psi_j. max_residual[j-1] is the worst deviation
/// for shape j over the checkpoint times, derivatives taken by centered
/// differences at the quadrature step.
struct HistoryResidualReport {
  VectorXd max_residual;  // indexed by shape j = 1..k+1
  double worst;
};

/// history must be defined on [-t_hist, t_end + step]; throws
/// InsufficientHistoryError when the Gamma tail beyond t_hist exceeds 1e-10.
HistoryResidualReport chain_trick_residual(
    const KernelSpec& spec, const std::function<Complex(double)>& history,
    double t_hist, double t_end, double step, int n_checkpoints = 17);

}  // namespace memstab
