#pragma once

#include "memstab/kernel.hpp"
#include "memstab/stability.hpp"
#include "memstab/types.hpp"

#include <functional>
#include <random>

namespace memstab::test {

// Adaptive Simpson quadrature, the independent oracle for mass checks.
inline double adaptive_simpson_step(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol,
                               depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol,
                               depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-10,
                               int depth = 40) {
  // Geometrically growing panels keep localized integrands visible to the
  // refinement test on long ranges.
  double total = 0.0;
  double left = a;
  double width = std::min(1.0, b - a);
  while (left < b) {
    const double right = std::min(b, left + width);
    const double fa = f(left), fb = f(right), fm = f(0.5 * (left + right));
    const double whole = (right - left) / 6.0 * (fa + 4.0 * fm + fb);
    total +=
        adaptive_simpson_step(f, left, right, fa, fm, fb, whole, tol, depth);
    left = right;
    width *= 2.0;
  }
  return total;
}

// Random spec with theta_1 in [0.2, 2] and sparse non-negative tail weights;
// the zeroed entries exercise the degenerate weight patterns.
inline KernelSpec random_spec(std::mt19937& rng, int k_min, int k_max,
                              double tail_scale = 2.0) {
  std::uniform_int_distribution<int> pick_k(k_min, k_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int k = pick_k(rng);
  VectorXd theta(k + 1);
  theta[0] = 0.2 + 1.8 * unit(rng);
  for (int j = 1; j <= k; ++j) {
    const double u = unit(rng);
    theta[j] = u < 0.3 ? 0.0 : tail_scale * unit(rng);
  }
  return KernelSpec{k, theta, 1.0};
}

inline KernelSpec random_hf_stable_spec(std::mt19937& rng, int k_min,
                                        int k_max) {
  for (;;) {
    KernelSpec spec = random_spec(rng, k_min, k_max);
    if (high_freq_stable(spec)) return spec;
  }
}

// Weights satisfying the dominant-first-weight condition sum_{j>=2} < theta_1.
inline KernelSpec random_dominant_spec(std::mt19937& rng, int k_min,
                                       int k_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KernelSpec spec = random_spec(rng, k_min, k_max);
  const double tail = spec.theta.tail(spec.k).sum();
  if (tail > 0.0) {
    const double budget = spec.theta[0] * (0.05 + 0.9 * unit(rng));
    spec.theta.tail(spec.k) *= budget / tail;
  }
  return spec;
}

}  // namespace memstab::test
