#include "memstab/dispersion.hpp"

#include "memstab/kernel.hpp"
#include "memstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace memstab {

Complex eval_p(const KernelSpec& spec, Complex lambda, Complex mu) {
  spec.validate();
  return eval_p<double>(spec.theta, lambda, mu);
}

VectorXd dispersion_coefficients(const KernelSpec& spec, double xi) {
  require_unit_scale(spec);
  return dispersion_coefficients<double>(spec.theta, xi);
}

VectorXcd roots_at(const KernelSpec& spec, double xi, double tol) {
  try {
    return poly_roots(dispersion_coefficients(spec, xi), tol);
  } catch (const ConvergenceError& e) {
    std::ostringstream msg;
    msg << "roots_at: xi = " << xi << ": " << e.what();
    throw ConvergenceError(msg.str(), e.worst_residual);
  }
}

std::vector<int> min_cost_assignment(const VectorXcd& prev,
                                     const VectorXcd& next) {
  const int n = static_cast<int>(prev.size());
  if (next.size() != n)
    throw std::invalid_argument("min_cost_assignment: size mismatch");
  if (n == 0) return {};
  // dp over subsets of `next`; row index = popcount. Ties resolve toward the
  // lowest next-index, which preserves the previous ordering.
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> dp(full, std::numeric_limits<double>::infinity());
  std::vector<int> choice(full, -1);
  dp[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!std::isfinite(dp[mask])) continue;
    const int i = __builtin_popcountll(mask);
    if (i == n) continue;
    for (int j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      const std::size_t to = mask | (std::size_t{1} << j);
      const double cost = dp[mask] + std::abs(next[j] - prev[i]);
      if (cost < dp[to]) {
        dp[to] = cost;
        choice[to] = j;
      }
    }
  }
  std::vector<int> assignment(n);
  std::size_t mask = full - 1;
  for (int i = n - 1; i >= 0; --i) {
    const int j = choice[mask];
    assignment[i] = j;
    mask &= ~(std::size_t{1} << j);
  }
  return assignment;
}

Spectrum spectrum_on_grid(const KernelSpec& spec, const VectorXd& xi,
                          double tol) {
  require_unit_scale(spec);
  if (xi.size() < 1) throw DomainError("xi grid must be non-empty");
  const int n_branches = spec.k + 2;

  Spectrum out;
  out.xi = xi;
  out.branches.assign(n_branches, VectorXcd(xi.size()));
  out.envelope = VectorXd(xi.size());

  VectorXcd prev = roots_at(spec, xi[0], tol);
  // Initial ordering: descending real part, then imaginary part; the
  // dominant branch comes first.
  std::vector<int> order(n_branches);
  for (int b = 0; b < n_branches; ++b) order[b] = b;
  std::sort(order.begin(), order.end(), [&prev](int a, int b) {
    if (prev[a].real() != prev[b].real()) return prev[a].real() > prev[b].real();
    return prev[a].imag() > prev[b].imag();
  });
  VectorXcd current(n_branches);
  for (int b = 0; b < n_branches; ++b) current[b] = prev[order[b]];

  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    if (i > 0) {
      const VectorXcd fresh = roots_at(spec, xi[i], tol);
      const std::vector<int> match = min_cost_assignment(current, fresh);
      VectorXcd matched(n_branches);
      for (int b = 0; b < n_branches; ++b) matched[b] = fresh[match[b]];
      current = matched;
    }
    double env = current[0].real();
    for (int b = 0; b < n_branches; ++b) {
      out.branches[b][i] = current[b];
      env = std::max(env, current[b].real());
    }
    out.envelope[i] = env;
  }
  return out;
}

Spectrum spectrum(const KernelSpec& spec, double xi_min, double xi_max,
                  int n_points, bool log_spacing, double tol) {
  if (!(xi_min >= 0.0) || !(xi_max > xi_min))
    throw DomainError("spectrum: requires 0 <= xi_min < xi_max");
  if (n_points < 2) throw DomainError("spectrum: n_points must be >= 2");
  if (log_spacing && xi_min <= 0.0)
    throw DomainError("spectrum: log spacing requires xi_min > 0");
  VectorXd grid(n_points);
  if (log_spacing) {
    const double ratio = std::log(xi_max / xi_min);
    for (int i = 0; i < n_points; ++i)
      grid[i] = xi_min * std::exp(ratio * i / double(n_points - 1));
  } else {
    for (int i = 0; i < n_points; ++i)
      grid[i] = xi_min + (xi_max - xi_min) * i / double(n_points - 1);
  }
  return spectrum_on_grid(spec, grid, tol);
}

VectorXd default_xi_grid() {
  const int n = 2000;
  VectorXd grid(n + 1);
  grid[0] = 0.0;
  const double lo = 1e-3, hi = 1e3;
  for (int i = 0; i < n; ++i)
    grid[i + 1] = lo * std::exp(std::log(hi / lo) * i / double(n - 1));
  return grid;
}

Spectrum default_spectrum(const KernelSpec& spec, double tol) {
  return spectrum_on_grid(spec, default_xi_grid(), tol);
}

double slow_branch_diffusivity(const KernelSpec& spec) {
  spec.validate();
  return spec.theta.sum();
}

FastBranchLimit fast_branch_limit(const KernelSpec& spec) {
  spec.validate();
  const double theta1 = spec.theta[0];
  const double theta2 = spec.theta_at(2);
  return FastBranchLimit{std::sqrt(theta1),
                         -(theta1 - theta2) / (2.0 * theta1)};
}

VectorXcd slow_branch_limits(const KernelSpec& spec, double tol) {
  const VectorXd q = q_coefficients(spec);
  if (q.size() == 1) return VectorXcd(0);  // k = 0: no intermediate branches
  return poly_roots(q, tol);
}

}  // namespace memstab
