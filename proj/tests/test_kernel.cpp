#include "memstab/kernel.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace memstab;

TEST_CASE("gamma density values at the origin and unit time") {
  CHECK(eval_gamma(1, 1.0, 0.0) == 1.0);
  CHECK(eval_gamma(2, 1.0, 0.0) == 0.0);
  CHECK(eval_gamma(3, 1.0, 0.0) == 0.0);
  CHECK(eval_gamma(2, 1.0, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(eval_gamma(4, 2.0, 3.0) ==
        doctest::Approx(27.0 / (6.0 * 16.0) * std::exp(-1.5)).epsilon(1e-14));
}

TEST_CASE("gamma density rejects invalid arguments") {
  CHECK_THROWS_AS(eval_gamma(0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_gamma(1, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_gamma(1, -2.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_gamma(1, 1.0, -1e-9), DomainError);
}

TEST_CASE("gamma densities are non-negative with unit mass") {
  for (int j : {1, 2, 3, 5, 8}) {
    for (double tau : {0.5, 1.0, 2.5}) {
      const double t_max = 60.0 * tau * (j + 5);
      for (double t = 0.0; t <= 20.0 * tau; t += 0.37 * tau)
        CHECK(eval_gamma(j, tau, t) >= 0.0);
      const double mass = test::adaptive_simpson(
          [j, tau](double t) { return eval_gamma(j, tau, t); }, 0.0, t_max);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("kernel evaluation matches the k=2 closed form") {
  CHECK(eval_kernel(make_spec({1.0, 0.4, 1.0}), 0.0) == 1.0);

  const KernelSpec spec = make_spec({1.0, 0.2, 0.5});
  const double expected = (1.0 + 0.2 * 2.0 + 0.5 * 0.5 * 4.0) * std::exp(-2.0);
  CHECK(eval_kernel(spec, 2.0) == doctest::Approx(expected).epsilon(1e-14));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const KernelSpec random = test::random_spec(rng, 2, 2);
    const double t = 8.0 * unit(rng);
    const double closed = (random.theta[0] + random.theta[1] * t +
                           0.5 * random.theta[2] * t * t) *
                          std::exp(-t);
    CHECK(eval_kernel(random, t) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("k=0 kernel is a pure exponential") {
  const double alpha = 1.7;
  const KernelSpec spec = make_spec({alpha});
  for (double t = 0.0; t < 12.0; t += 0.63)
    CHECK(eval_kernel(spec, t) ==
          doctest::Approx(alpha * std::exp(-t)).epsilon(1e-14));
}

TEST_CASE("total mass is the weight sum") {
  CHECK(total_mass(make_spec({1.0, 0.0, 0.0})) == 1.0);
  CHECK(total_mass(make_spec({1.0, 0.4, 1.0})) == doctest::Approx(2.4));

  const KernelSpec spec = make_spec({0.5, 0.25, 0.25});
  CHECK(total_mass(spec) == 1.0);
  const double quad = test::adaptive_simpson(
      [&spec](double t) { return eval_kernel(spec, t); }, 0.0, 60.0);
  CHECK(quad == doctest::Approx(total_mass(spec)).epsilon(1e-8));
}

TEST_CASE("shape classification at the reference eta points") {
  const ShapeReport p1 = classify_shape_k2(spec_from_eta(0.8, 2.0));
  CHECK_FALSE(p1.monotone_decreasing);
  CHECK_FALSE(p1.convex);

  const ShapeReport p2 = classify_shape_k2(spec_from_eta(0.6, 1.5));
  CHECK(p2.monotone_decreasing);
  CHECK_FALSE(p2.convex);

  const ShapeReport p3 = classify_shape_k2(spec_from_eta(0.4, 1.0));
  CHECK(p3.monotone_decreasing);
  CHECK_FALSE(p3.convex);

  const ShapeReport p4 = classify_shape_k2(spec_from_eta(0.2, 0.5));
  CHECK(p4.monotone_decreasing);
  CHECK(p4.convex);
}

TEST_CASE("region boundaries count as inside") {
  CHECK(in_region_m(1.0, 1.0));          // on the circle and the strip edge
  CHECK(in_region_m(0.5, 0.5));          // wedge edge eta2 == eta3
  CHECK_FALSE(in_region_m(1.0 + 1e-12, 0.5));
  CHECK(in_region_c(0.5, 0.0));          // 2 eta2 - eta3 == 1
  CHECK_FALSE(in_region_c(0.5 + 1e-12, 0.0));
}

namespace {

struct FdShape {
  bool monotone;
  bool convex;
};

// Sign-sampling oracle: centered differences of eval_kernel on [0, 50] at
// step 1e-3.
FdShape fd_shape(const KernelSpec& spec) {
  const double h = 1e-3;
  const int n = static_cast<int>(50.0 / h);
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = eval_kernel(spec, i * h);
  const double scale = spec.theta[0];
  double max_d1 = -1e300, min_d2 = 1e300;
  for (int i = 1; i < n; ++i) {
    max_d1 = std::max(max_d1, (g[i + 1] - g[i - 1]) / (2.0 * h));
    min_d2 = std::min(min_d2, (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h));
  }
  return FdShape{max_d1 <= 1e-9 * scale, min_d2 >= -1e-7 * scale};
}

bool near_region_boundary(double e2, double e3, double band) {
  const auto close = [band](double value) { return std::abs(value) < band; };
  return close(e2) || close(e3) || close(e2 - 1.0) || close(e2 - e3) ||
         close(e2 * e2 + (e3 - 1.0) * (e3 - 1.0) - 1.0) ||
         close(2.0 * e2 - e3 - 1.0) || close(e2 - 2.0 * e3) ||
         close(2.0 * e2 * e2 + 4.0 * (e3 - 0.5) * (e3 - 0.5) - 1.0);
}

}  // namespace

TEST_CASE("shape classification agrees with the finite-difference oracle") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coord(0.0, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double e2 = coord(rng), e3 = coord(rng);
    if (near_region_boundary(e2, e3, 1e-6)) continue;
    const KernelSpec spec = spec_from_eta(e2, e3);
    const ShapeReport predicted = classify_shape_k2(spec);
    const FdShape sampled = fd_shape(spec);
    CAPTURE(e2);
    CAPTURE(e3);
    CHECK(predicted.monotone_decreasing == sampled.monotone);
    CHECK(predicted.convex == sampled.convex);
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("k=1 second derivative changes sign at 2 - theta1/theta2") {
  // theta_2 < theta_1 < 2 theta_2: decreasing, non-convex, and still stable.
  const KernelSpec spec = make_spec({1.0, 0.7});
  const double flip = 2.0 - 1.0 / 0.7;
  const double h = 1e-4;
  const auto d2 = [&](double t) {
    return (eval_kernel(spec, t + h) - 2.0 * eval_kernel(spec, t) +
            eval_kernel(spec, t - h)) /
           (h * h);
  };
  CHECK(d2(0.5 * flip) < 0.0);
  CHECK(d2(flip + 0.5) > 0.0);
  double lo = 0.1, hi = 2.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (d2(mid) < 0.0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(flip).epsilon(1e-4));
}

TEST_CASE("spec validation enforces the invariants") {
  CHECK_THROWS_AS(make_spec({}).validate(), DomainError);
  CHECK_THROWS_AS(make_spec({0.0, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(make_spec({-1.0}).validate(), DomainError);
  CHECK_THROWS_AS(make_spec({1.0, -0.1}).validate(), DomainError);
  CHECK_THROWS_AS(make_spec({1.0}, 0.0).validate(), DomainError);

  KernelSpec mismatched = make_spec({1.0, 0.5});
  mismatched.k = 3;
  CHECK_THROWS_AS(mismatched.validate(), DomainError);

  const KernelSpec spec = make_spec({2.0, 1.0, 0.5}, 4.0);
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.theta_at(1) == 2.0);
  CHECK(spec.theta_at(3) == 0.5);
  CHECK(spec.theta_at(4) == 0.0);
  CHECK(spec.normalized().tau == 1.0);
  CHECK(rescale_time(4.0, 2.0) == 0.5);
  CHECK_THROWS_AS(require_unit_scale(spec), DomainError);

  const EtaCoordinates eta = eta_coordinates(spec.normalized());
  CHECK(eta.eta2() == 0.5);
  CHECK(eta.eta3() == 0.25);
}

TEST_CASE("classify_shape_k2 rejects other orders") {
  CHECK_THROWS_AS(classify_shape_k2(make_spec({1.0, 0.5})),
                  UnsupportedOrderError);
}
