#include "memstab/kernel.hpp"

#include <sstream>

namespace memstab {

void KernelSpec::validate() const {
  if (k < 0) throw DomainError("k: must be a non-negative integer");
  if (theta.size() != k + 1) {
    std::ostringstream msg;
    msg << "theta: expected k+1 = " << k + 1 << " entries, got " << theta.size();
    throw DomainError(msg.str());
  }
  if (!(theta[0] > 0.0)) throw DomainError("theta: theta_1 must be positive");
  for (Eigen::Index i = 1; i < theta.size(); ++i) {
    if (!(theta[i] >= 0.0))
      throw DomainError("theta: weights must be non-negative");
  }
  if (!(tau > 0.0)) throw DomainError("tau: must be positive");
}

KernelSpec make_spec(std::initializer_list<double> theta, double tau) {
  KernelSpec spec;
  spec.k = static_cast<int>(theta.size()) - 1;
  spec.theta = Eigen::Map<const VectorXd>(theta.begin(),
                                          static_cast<Eigen::Index>(theta.size()));
  spec.tau = tau;
  return spec;
}

EtaCoordinates eta_coordinates(const KernelSpec& spec) {
  spec.validate();
  EtaCoordinates out;
  out.eta = spec.theta.tail(spec.k) / spec.theta[0];
  return out;
}

KernelSpec spec_from_eta(double eta2, double eta3, double theta1) {
  KernelSpec spec;
  spec.k = 2;
  spec.theta = theta1 * Eigen::Vector3d(1.0, eta2, eta3);
  spec.tau = 1.0;
  return spec;
}

void require_unit_scale(const KernelSpec& spec) {
  spec.validate();
  if (spec.tau != 1.0)
    throw DomainError(
        "tau: analysis requires the unit time scale; call normalized() first");
}

double eval_gamma(int shape, double tau, double t) {
  return gamma_density<double>(shape, tau, t);
}

double eval_kernel(const KernelSpec& spec, double t) {
  spec.validate();
  double value = 0.0;
  for (int j = 1; j <= spec.k + 1; ++j)
    value += spec.theta[j - 1] * gamma_density<double>(j, spec.tau, t);
  return value;
}

double total_mass(const KernelSpec& spec) {
  spec.validate();
  return spec.theta.sum();
}

bool in_region_m(double eta2, double eta3) {
  if (eta2 < 0.0 || eta2 > 1.0 || eta3 < 0.0) return false;
  const double disc = eta2 * eta2 + (eta3 - 1.0) * (eta3 - 1.0);
  return eta2 - eta3 >= 0.0 || disc <= 1.0;
}

bool in_region_c(double eta2, double eta3) {
  if (eta2 < 0.0 || eta3 < 0.0 || 2.0 * eta2 - eta3 > 1.0) return false;
  const double ell = 2.0 * eta2 * eta2 + 4.0 * (eta3 - 0.5) * (eta3 - 0.5);
  return eta2 - 2.0 * eta3 >= 0.0 || ell <= 1.0;
}

ShapeReport classify_shape_k2(const KernelSpec& spec) {
  require_unit_scale(spec);
  if (spec.k != 2)
    throw UnsupportedOrderError("classify_shape_k2: requires k = 2");
  const EtaCoordinates eta = eta_coordinates(spec);
  return ShapeReport{in_region_m(eta.eta2(), eta.eta3()),
                     in_region_c(eta.eta2(), eta.eta3())};
}

}  // namespace memstab
