#include "memstab/polyroots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace memstab {

Complex poly_eval(const VectorXd& coeffs, Complex x) {
  return poly_eval<double>(coeffs, x);
}

Complex poly_derivative_eval(const VectorXd& coeffs, Complex x) {
  Complex acc(0, 0);
  for (Eigen::Index i = coeffs.size() - 1; i >= 1; --i)
    acc = acc * x + static_cast<double>(i) * coeffs[i];
  return acc;
}

namespace {

double residual_scale(Complex root, int degree) {
  return std::pow(1.0 + std::abs(root), degree);
}

// Fujiwara-style bound on the root magnitudes, used to rescale the variable
// so the companion matrix stays well balanced when coefficients span many
// orders of magnitude (large frequencies).
double root_scale_bound(const VectorXd& monic) {
  const Eigen::Index deg = monic.size() - 1;
  double bound = 0.0;
  for (Eigen::Index m = 0; m < deg; ++m) {
    if (monic[m] == 0.0) continue;
    bound = std::max(bound,
                     std::pow(std::abs(monic[m]), 1.0 / double(deg - m)));
  }
  return bound > 0.0 ? 2.0 * bound : 1.0;
}

void newton_polish(const VectorXd& coeffs, Complex& root) {
  Complex best = root;
  double best_abs = std::abs(poly_eval(coeffs, root));
  for (int iter = 0; iter < 12; ++iter) {
    const Complex p = poly_eval(coeffs, root);
    const Complex dp = poly_derivative_eval(coeffs, root);
    if (std::abs(dp) == 0.0) break;  // multiple root; keep the cluster value
    root -= p / dp;
    const double now = std::abs(poly_eval(coeffs, root));
    if (now < best_abs) {
      best_abs = now;
      best = root;
    } else {
      break;
    }
  }
  root = best;
}

}  // namespace

VectorXcd poly_roots(const VectorXd& coeffs, double tol) {
  if (coeffs.size() < 1 || coeffs[coeffs.size() - 1] == 0.0)
    throw std::invalid_argument("poly_roots: leading coefficient must be nonzero");

  // Deflate exact zero roots so e.g. the zero-frequency spectrum carries an
  // exact zero eigenvalue.
  Eigen::Index n_zero = 0;
  while (n_zero < coeffs.size() - 1 && coeffs[n_zero] == 0.0) ++n_zero;
  const VectorXd work = coeffs.tail(coeffs.size() - n_zero);
  const Eigen::Index deg = work.size() - 1;
  const int full_degree = static_cast<int>(coeffs.size() - 1);

  VectorXcd roots(full_degree);
  roots.head(n_zero).setZero();
  if (deg > 0) {
    VectorXd monic = work / work[deg];
    const double sigma = root_scale_bound(monic);
    VectorXd scaled(monic.size());
    double pw = 1.0;  // sigma^(deg - m) applied from the top down
    for (Eigen::Index m = deg; m >= 0; --m) {
      scaled[m] = monic[m] * pw;
      pw /= sigma;
    }
    MatrixXd companion = MatrixXd::Zero(deg, deg);
    companion.diagonal(-1).setOnes();
    companion.col(deg - 1) = -scaled.head(deg);
    Eigen::EigenSolver<MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    VectorXcd raw = solver.eigenvalues() * sigma;
    for (Eigen::Index i = 0; i < deg; ++i) {
      Complex r = raw[i];
      newton_polish(monic, r);
      roots[n_zero + i] = r;
    }
  }

  double worst = 0.0;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double res = std::abs(poly_eval(coeffs, roots[i])) /
                       (std::abs(coeffs[coeffs.size() - 1]) *
                        residual_scale(roots[i], full_degree));
    worst = std::max(worst, res);
  }
  if (worst > tol)
    throw ConvergenceError("poly_roots: residual tolerance not met", worst);
  return roots;
}

std::vector<double> real_roots_in(const VectorXd& coeffs, double min_value,
                                  double max_value, double imag_tol,
                                  double cluster_tol, double tol) {
  const VectorXcd roots = poly_roots(coeffs, tol);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (std::abs(roots[i].imag()) > imag_tol * (1.0 + std::abs(roots[i])))
      continue;
    const double r = roots[i].real();
    if (r <= min_value || r > max_value) continue;
    bool duplicate = false;
    for (double seen : out)
      if (std::abs(seen - r) <= cluster_tol * (1.0 + std::abs(seen)))
        duplicate = true;
    if (!duplicate) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

VectorXd poly_mul(const VectorXd& a, const VectorXd& b) {
  VectorXd out = VectorXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

VectorXd one_plus_x_pow(int n) {
  VectorXd out(n + 1);
  for (int r = 0; r <= n; ++r) out[r] = binomial(n, r);
  return out;
}

}  // namespace memstab
