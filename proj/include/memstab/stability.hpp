#pragma once

#include "memstab/dispersion.hpp"
#include "memstab/polyroots.hpp"
#include "memstab/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace memstab {

/// Ascending coefficients q_0..q_k of the high-frequency polynomial
///   Q(x) = sum_l q_l x^l,  q_l = sum_{j=1}^{k+1-l} C(k+1-j, l) theta_j,
/// whose roots are the large-frequency limits of the intermediate branches.
template <typename Scalar>
Vector<Scalar> q_coefficients_hf(const Vector<Scalar>& theta) {
  const int k = static_cast<int>(theta.size()) - 1;
  Vector<Scalar> q = Vector<Scalar>::Zero(k + 1);
  for (int l = 0; l <= k; ++l)
    for (int j = 1; j <= k + 1 - l; ++j)
      q[l] += binomial<Scalar>(k + 1 - j, l) * theta[j - 1];
  return q;
}

/// The same coefficients by the reindexed route
/// q_l = sum_{j=l}^{k} C(j, l) theta_{k+1-j}; kept as an algebraic
/// cross-check of q_coefficients_hf.
template <typename Scalar>
Vector<Scalar> q_coefficients_expanded(const Vector<Scalar>& theta) {
  const int k = static_cast<int>(theta.size()) - 1;
  Vector<Scalar> q = Vector<Scalar>::Zero(k + 1);
  for (int l = 0; l <= k; ++l)
    for (int j = l; j <= k; ++j)
      q[l] += binomial<Scalar>(j, l) * theta[k - j];
  return q;
}

VectorXd q_coefficients(const KernelSpec& spec);

/// Routh table of a real polynomial (ascending coefficients, nonzero leading
/// coefficient, sign-normalized so the leading coefficient is positive).
/// Strict Hurwitz iff every first-column entry is strictly positive; an exact
/// zero pivot marks the table degenerate (marginal case, not strict).
struct HurwitzReport {
  VectorXd coeffs;                             // input, ascending
  std::vector<std::vector<double>> routh_rows; // first column is the test column
  bool is_strict_hurwitz = false;
  bool degenerate = false;
};

HurwitzReport routh_hurwitz(const VectorXd& ascending_coeffs);

/// Large frequencies decay iff theta_2 < theta_1 and Q is strictly Hurwitz.
bool high_freq_stable(const KernelSpec& spec);

/// Sufficient condition for uniform dissipation at every frequency:
/// sum_{j>=2} theta_j < theta_1.
bool sufficient_stable_anyk(const KernelSpec& spec);

/// Sharp k = 2 characterization of uniform dissipation:
/// theta_2 < theta_1 and (3 theta_3 < 2 theta_1 or
/// (2 theta_2 + theta_3)^2 + 8 (theta_3 - theta_1)^2 < 8 theta_1^2).
bool sharp_stable_k2(const KernelSpec& spec);

/// Purely imaginary spectrum point lambda = i zeta at frequency xi; s = zeta^2.
struct Crossing {
  double zeta;
  double xi;
  double s;
};

/// Real polynomial in s = zeta^2 whose positive roots locate candidate
/// imaginary-axis crossings: the real-part equation with denominators
/// cleared by (1+s)^{k+1}. Ascending coefficients, degree <= k.
VectorXd crossing_polynomial(const KernelSpec& spec);

/// Right-hand side of the xi^2 relation at a root s of the crossing
/// polynomial; a crossing exists iff this is positive.
double crossing_xi_squared(const KernelSpec& spec, double s);

/// All imaginary-axis crossings with s in (0, s_max]. The crossing polynomial
/// is a genuine polynomial, so every real root is found; s_max only bounds
/// what is reported.
std::vector<Crossing> crossing_search(const KernelSpec& spec,
                                      double s_max = 1e6,
                                      double tol = kDefaultRootTol);

/// Dissipation rate constant: the largest c0 with
/// envelope(xi) <= -c0 xi^2 / (1 + xi^2) over the grid, frequencies below
/// 1e-3 excluded (the zero-frequency end is covered by the slow-branch
/// expansion). Fails, carrying the offending frequency, when the envelope is
/// non-negative at some xi != 0.
struct C0Estimate {
  bool ok = false;
  double c0 = 0.0;
  double offending_xi = 0.0;
};

C0Estimate estimate_c0(const KernelSpec& spec, const Spectrum& sp);

/// Uniform-dissipation region in the (eta2, eta3) plane for k = 2 (closed).
bool in_region_s(double eta2, double eta3);

struct RegionMembership {
  bool in_s;
  bool in_m;
  bool in_c;
};

RegionMembership region_membership_k2(double eta2, double eta3);

enum class StabilityClass { Stable, HighFreqUnstable, IntermediateUnstable };

const char* to_string(StabilityClass cls);

/// Closed-form k = 2 classification in eta coordinates; no spectrum sweep,
/// so no rate constant. Used for dense region maps.
StabilityClass classify_k2_analytic(double eta2, double eta3);

/// Full classification: class, dissipation constant c0 when stable,
/// imaginary-axis crossings when unstable at intermediate frequencies, and a
/// trace of the criteria that decided.
struct StabilityVerdict {
  StabilityClass cls = StabilityClass::Stable;
  std::optional<double> c0;
  bool criterion_backed = false;  // stable by an analytic criterion, not only by the sweep
  std::vector<Crossing> crossings;
  std::vector<std::string> trace;
};

StabilityVerdict classify(const KernelSpec& spec, double tol = kDefaultRootTol);

}  // namespace memstab
