#include "memstab/chain_trick.hpp"

#include "memstab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace memstab {

SystemMatrices build_system(const KernelSpec& spec) {
  require_unit_scale(spec);
  const Eigen::Index n = spec.k + 2;
  SystemMatrices m;
  m.a0 = MatrixXd::Identity(n, n);
  m.a1 = MatrixXd::Zero(n, n);
  m.a1.row(0).tail(spec.k + 1) = spec.theta.transpose();
  m.a1(1, 0) = 1.0;
  m.b = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) m.b(i, i) = 1.0;
  for (Eigen::Index i = 2; i < n; ++i) m.b(i, i - 1) = -1.0;
  return m;
}

EigenStructure eigen_structure(const SystemMatrices& m, const KernelSpec& spec) {
  const int k = spec.k;
  const double theta1 = spec.theta.size() > 0 ? spec.theta[0] : 0.0;
  if (!(theta1 > 0.0)) {
    std::ostringstream msg;
    msg << "eigen_structure: principal part not diagonalizable for theta_1 = "
        << theta1;
    if (theta1 == 0.0)
      msg << " (single eigenvalue 0, algebraic multiplicity " << k + 2
          << ", geometric multiplicity " << k << ")";
    else
      msg << " (eigenvalues not all real)";
    throw HyperbolicityError(msg.str());
  }

  const Eigen::Index n = k + 2;
  EigenStructure out;
  out.speed = std::sqrt(theta1);
  out.zero_multiplicity = k;
  out.eigenvalues = VectorXd::Zero(n);
  out.eigenvalues[0] = -out.speed;
  out.eigenvalues[1] = out.speed;
  out.eigenvectors = MatrixXd::Zero(n, n);
  out.eigenvectors(0, 0) = 1.0;
  out.eigenvectors(1, 0) = -1.0 / out.speed;
  out.eigenvectors(0, 1) = 1.0;
  out.eigenvectors(1, 1) = 1.0 / out.speed;
  // Kernel of A1: u = 0 and sum_j theta_j psi_j = 0.
  for (int i = 2; i <= k + 1; ++i) {
    out.eigenvectors(1, i) = -spec.theta[i - 1];
    out.eigenvectors(i, i) = theta1;
  }
  (void)m;
  return out;
}

double gamma_tail_mass(int shape, double t) {
  // int_t^inf g_j = e^{-t} sum_{m<j} t^m / m!
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < shape; ++m) {
    term *= t / m;
    sum += term;
  }
  return std::exp(-t) * sum;
}

Complex history_convolve(int shape, const std::function<Complex(double)>& phi,
                         double t, double window, double step) {
  const auto n = static_cast<Eigen::Index>(std::ceil(window / step));
  const double h = window / static_cast<double>(n);
  Complex acc = 0.5 * (gamma_density<double>(shape, 1.0, 0.0) * phi(t) +
                       gamma_density<double>(shape, 1.0, window) * phi(t - window));
  for (Eigen::Index i = 1; i < n; ++i) {
    const double lag = h * static_cast<double>(i);
    acc += gamma_density<double>(shape, 1.0, lag) * phi(t - lag);
  }
  return acc * h;
}

HistoryResidualReport chain_trick_residual(
    const KernelSpec& spec, const std::function<Complex(double)>& history,
    double t_hist, double t_end, double step, int n_checkpoints) {
  require_unit_scale(spec);
  if (!(step > 0.0)) throw DomainError("step: must be positive");
  if (n_checkpoints < 1) throw DomainError("n_checkpoints: must be >= 1");

  const double tail = gamma_tail_mass(spec.k + 1, t_hist);
  if (tail > 1e-10) {
    std::ostringstream msg;
    msg << "history window " << t_hist << " leaves Gamma tail mass " << tail
        << " > 1e-10 for shape " << spec.k + 1;
    throw InsufficientHistoryError(msg.str());
  }

  // psi_j at t and t +- step for every checkpoint; psi_0 is the history itself.
  std::vector<double> checkpoints(n_checkpoints);
  for (int c = 0; c < n_checkpoints; ++c)
    checkpoints[c] = n_checkpoints == 1
                         ? t_end
                         : t_end * static_cast<double>(c) / (n_checkpoints - 1);

  const int n_shapes = spec.k + 1;
  HistoryResidualReport report;
  report.max_residual = VectorXd::Zero(n_shapes);

  std::vector<std::vector<Complex>> at_t(n_shapes + 1,
                                         std::vector<Complex>(n_checkpoints));
  for (int c = 0; c < n_checkpoints; ++c) at_t[0][c] = history(checkpoints[c]);

  for (int j = 1; j <= n_shapes; ++j) {
    for (int c = 0; c < n_checkpoints; ++c) {
      const double t = checkpoints[c];
      const Complex center = history_convolve(j, history, t, t + t_hist, step);
      const Complex left =
          history_convolve(j, history, t - step, t - step + t_hist, step);
      const Complex right =
          history_convolve(j, history, t + step, t + step + t_hist, step);
      at_t[j][c] = center;
      const Complex derivative = (right - left) / (2.0 * step);
      const Complex residual = derivative - (at_t[j - 1][c] - center);
      report.max_residual[j - 1] =
          std::max(report.max_residual[j - 1], std::abs(residual));
    }
  }
  report.worst = report.max_residual.maxCoeff();
  return report;
}

}  // namespace memstab
