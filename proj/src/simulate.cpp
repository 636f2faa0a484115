#include "memstab/simulate.hpp"

#include "memstab/chain_trick.hpp"
#include "memstab/dispersion.hpp"
#include "memstab/kernel.hpp"
#include "memstab/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace memstab {

namespace {

double step_bound(const KernelSpec& spec, double xi) {
  return 0.5 / (std::sqrt(spec.theta[0]) * std::abs(xi) + 1.0);
}

// Steps rounded up to a multiple of n_store - 1 so the stored samples land
// exactly on j * t_end / (n_store - 1) for every mode.
Eigen::Index step_count(double t_end, double dt, int n_store) {
  const Eigen::Index blocks = n_store - 1;
  Eigen::Index n = static_cast<Eigen::Index>(std::ceil(t_end / dt));
  n = std::max(n, blocks);
  if (n % blocks != 0) n += blocks - n % blocks;
  return n;
}

}  // namespace

double fit_log_slope(const VectorXd& times, const VectorXd& amplitude,
                     double fraction) {
  const Eigen::Index n = times.size();
  const Eigen::Index start =
      std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(
                                        std::floor(n * (1.0 - fraction))));
  double st = 0, sy = 0, stt = 0, sty = 0;
  Eigen::Index cnt = 0;
  for (Eigen::Index i = start; i < n; ++i) {
    if (!(amplitude[i] > 0.0)) continue;
    const double y = std::log(amplitude[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++cnt;
  }
  if (cnt < 2) return 0.0;
  const double denom = cnt * stt - st * st;
  if (denom == 0.0) return 0.0;
  return (cnt * sty - st * sy) / denom;
}

ModalSeries integrate_modal_series(const KernelSpec& spec, double xi,
                                   const VectorXcd& w0, double t_end,
                                   double dt, int n_store) {
  require_unit_scale(spec);
  if (w0.size() != spec.k + 2)
    throw DomainError("w0: expected k+2 mode amplitudes");
  if (!(t_end > 0.0)) throw DomainError("t_end: must be positive");
  if (!(dt > 0.0)) throw DomainError("dt: must be positive");
  if (n_store < 2) throw DomainError("n_store: must be >= 2");
  const double bound = step_bound(spec, xi);
  if (dt > bound) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the explicit step bound " << bound
        << " at xi = " << xi;
    throw StepSizeError(msg.str());
  }

  const SystemMatrices m = build_system(spec);
  const MatrixXcd rhs =
      -(Complex(0.0, xi) * m.a1.cast<Complex>() + m.b.cast<Complex>());

  const Eigen::Index n_steps = step_count(t_end, dt, n_store);
  const double h = t_end / static_cast<double>(n_steps);
  const Eigen::Index store_every = n_steps / (n_store - 1);

  ModalSeries series;
  series.times = VectorXd(n_store);
  series.u = VectorXcd(n_store);
  VectorXcd w = w0;
  series.times[0] = 0.0;
  series.u[0] = w[0];

  Eigen::Index stored = 1;
  for (Eigen::Index step = 1; step <= n_steps; ++step) {
    const VectorXcd k1 = rhs * w;
    const VectorXcd k2 = rhs * (w + 0.5 * h * k1);
    const VectorXcd k3 = rhs * (w + 0.5 * h * k2);
    const VectorXcd k4 = rhs * (w + h * k3);
    w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % store_every == 0) {
      const double t = h * static_cast<double>(step);
      if (!w.allFinite())
        throw NonFiniteError("integrate_mode: non-finite state", t);
      series.times[stored] = t;
      series.u[stored] = w[0];
      ++stored;
    }
  }
  series.w_final = w;
  return series;
}

SimResult integrate_mode(const KernelSpec& spec, double xi,
                         const VectorXcd& w0, double t_end, double dt,
                         double fit_fraction) {
  const ModalSeries series = integrate_modal_series(spec, xi, w0, t_end, dt);
  SimResult result;
  result.times = series.times;
  result.amplitude = series.u.cwiseAbs();
  result.final_u = series.u[series.u.size() - 1];
  result.fitted_rate =
      fit_log_slope(result.times, result.amplitude, fit_fraction);
  return result;
}

namespace {

// Trapezoidal history sums for int_0^t g(t-s) u(s) ds carried as exponential
// moments about a sliding base point: moment[r] holds the trapezoid value of
// int_0^t (s - base)^r e^{-(t-s)} u(s) ds. Rebasing keeps |s - base| small so
// the binomial recombination below stays well conditioned at any t_end.
class HistoryMoments {
 public:
  HistoryMoments(const KernelSpec& spec, Complex u0) : base_(0.0), t_(0.0) {
    const int k = spec.k;
    poly_ = VectorXd(k + 1);  // g(tau) = e^{-tau} sum_m poly_[m] tau^m
    double factorial = 1.0;
    for (int m = 0; m <= k; ++m) {
      if (m > 0) factorial *= m;
      poly_[m] = spec.theta[m] / factorial;
    }
    moments_ = VectorXcd::Zero(k + 1);
    u_last_ = u0;
  }

  // History integral at stage time t_ + c with the stage value u_stage,
  // extending the committed sums by one partial trapezoid interval.
  Complex integral_at(double c, Complex u_stage) const {
    const double decay = std::exp(-c);
    const double left = t_ - base_;
    const double right = t_ + c - base_;
    Complex value(0.0, 0.0);
    for (Eigen::Index m = 0; m < poly_.size(); ++m) {
      Complex s_m(0.0, 0.0);
      for (Eigen::Index r = 0; r <= m; ++r) {
        Complex moment = moments_[r] * decay;
        if (c > 0.0)
          moment += 0.5 * c *
                    (std::pow(left, double(r)) * decay * u_last_ +
                     std::pow(right, double(r)) * u_stage);
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        s_m += binomial(int(m), int(r)) * sign *
               std::pow(right, double(m - r)) * moment;
      }
      value += poly_[m] * s_m;
    }
    return value;
  }

  void commit(double h, Complex u_next) {
    const double decay = std::exp(-h);
    const double left = t_ - base_;
    const double right = t_ + h - base_;
    for (Eigen::Index r = 0; r < moments_.size(); ++r)
      moments_[r] = moments_[r] * decay +
                    0.5 * h *
                        (std::pow(left, double(r)) * decay * u_last_ +
                         std::pow(right, double(r)) * u_next);
    t_ += h;
    u_last_ = u_next;
    if (t_ - base_ > 10.0) rebase();
  }

 private:
  void rebase() {
    const double shift = t_ - base_;
    VectorXcd fresh = VectorXcd::Zero(moments_.size());
    for (Eigen::Index r = 0; r < moments_.size(); ++r)
      for (Eigen::Index rho = 0; rho <= r; ++rho)
        fresh[r] += binomial(int(r), int(rho)) *
                    std::pow(-shift, double(r - rho)) * moments_[rho];
    moments_ = fresh;
    base_ = t_;
  }

  double base_;
  double t_;
  VectorXd poly_;
  VectorXcd moments_;
  Complex u_last_;
};

}  // namespace

SimResult integrate_memory_quadrature(const KernelSpec& spec, double xi,
                                      Complex u0, double t_end, double dt,
                                      double fit_fraction) {
  require_unit_scale(spec);
  if (!(t_end > 0.0)) throw DomainError("t_end: must be positive");
  if (!(dt > 0.0)) throw DomainError("dt: must be positive");

  const int n_store = 1025;
  const Eigen::Index n_steps = step_count(t_end, dt, n_store);
  const double h = t_end / static_cast<double>(n_steps);
  const Eigen::Index store_every = n_steps / (n_store - 1);
  const double xi2 = xi * xi;

  SimResult result;
  result.times = VectorXd(n_store);
  result.amplitude = VectorXd(n_store);
  result.times[0] = 0.0;
  result.amplitude[0] = std::abs(u0);

  HistoryMoments history(spec, u0);
  Complex u = u0;
  Eigen::Index stored = 1;
  for (Eigen::Index step = 1; step <= n_steps; ++step) {
    const Complex k1 = -xi2 * history.integral_at(0.0, u);
    const Complex k2 = -xi2 * history.integral_at(0.5 * h, u + 0.5 * h * k1);
    const Complex k3 = -xi2 * history.integral_at(0.5 * h, u + 0.5 * h * k2);
    const Complex k4 = -xi2 * history.integral_at(h, u + h * k3);
    const Complex u_next = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    history.commit(h, u_next);
    u = u_next;
    if (step % store_every == 0) {
      const double t = h * static_cast<double>(step);
      if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
        throw NonFiniteError("integrate_memory_quadrature: non-finite state", t);
      result.times[stored] = t;
      result.amplitude[stored] = std::abs(u);
      ++stored;
    }
  }
  result.final_u = u;
  result.fitted_rate =
      fit_log_slope(result.times, result.amplitude, fit_fraction);
  return result;
}

FieldSimulation simulate_physical(const KernelSpec& spec, double domain_length,
                                  int n_modes,
                                  const std::function<double(double)>& initial_u,
                                  double t_end, double dt, int n_snapshots) {
  require_unit_scale(spec);
  if (!(domain_length > 0.0)) throw DomainError("domain_length: must be positive");
  if (n_modes < 2) throw DomainError("n_modes: must be >= 2");
  if (n_snapshots < 2) throw DomainError("n_snapshots: must be >= 2");

  const int n_samples = 2 * n_modes + 1;
  FieldSimulation sim;
  sim.x = VectorXd(n_samples);
  VectorXd u0(n_samples);
  for (int m = 0; m < n_samples; ++m) {
    sim.x[m] = domain_length * m / double(n_samples);
    u0[m] = initial_u(sim.x[m]);
  }

  // Plain DFT; mode counts stay small enough that no transform library is
  // warranted.
  VectorXcd coeffs(n_modes + 1);
  for (int n = 0; n <= n_modes; ++n) {
    Complex c(0.0, 0.0);
    for (int m = 0; m < n_samples; ++m)
      c += u0[m] * std::exp(Complex(0.0, -2.0 * std::numbers::pi * n * m /
                                             double(n_samples)));
    coeffs[n] = c / double(n_samples);
  }

  // Dense internal storage for trustworthy rate fits; snapshots are an
  // aligned subsample of it.
  const int blocks = n_snapshots - 1;
  const int refine = (255 + blocks) / blocks;
  const int n_store = blocks * refine + 1;
  std::vector<VectorXcd> mode_u(n_modes + 1);
  sim.mode_rates.reserve(n_modes + 1);
  for (int n = 0; n <= n_modes; ++n) {
    const double xi = 2.0 * std::numbers::pi * n / domain_length;
    double mode_dt = dt > 0.0 ? dt : 0.4 * step_bound(spec, xi);
    mode_dt = std::min(mode_dt, t_end / 256.0);
    VectorXcd w0 = VectorXcd::Zero(spec.k + 2);
    w0[0] = coeffs[n];
    ModalSeries series;
    try {
      series = integrate_modal_series(spec, xi, w0, t_end, mode_dt, n_store);
    } catch (const NonFiniteError& e) {
      std::ostringstream msg;
      msg << "mode n = " << n << " (xi = " << xi << "): " << e.what();
      throw NonFiniteError(msg.str(), e.time);
    }
    mode_u[n] = series.u;
    if (n == 0) {
      sim.snapshot_times = VectorXd(n_snapshots);
      for (int j = 0; j < n_snapshots; ++j)
        sim.snapshot_times[j] = series.times[j * refine];
    }

    double predicted = 0.0;
    if (n > 0) {
      const VectorXcd roots = roots_at(spec, xi);
      predicted = roots.real().maxCoeff();
    }
    sim.mode_rates.push_back(ModeRate{
        n, xi, fit_log_slope(series.times, series.u.cwiseAbs(), 0.5),
        predicted});
  }

  sim.field = MatrixXd(n_snapshots, n_samples);
  for (int j = 0; j < n_snapshots; ++j)
    for (int m = 0; m < n_samples; ++m) {
      double value = mode_u[0][j * refine].real();
      for (int n = 1; n <= n_modes; ++n) {
        const double phase =
            2.0 * std::numbers::pi * n * m / double(n_samples);
        value +=
            2.0 * (mode_u[n][j * refine] * std::exp(Complex(0.0, phase))).real();
      }
      sim.field(j, m) = value;
    }
  return sim;
}

}  // namespace memstab
