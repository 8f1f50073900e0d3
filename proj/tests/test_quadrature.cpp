// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "dualcas/constants.hpp"
#include "dualcas/quadrature.hpp"

using namespace dualcas;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("halfline analytic integrals") {
  const IntegralResult exp_decay =
      integrate_halfline([](double x) { return std::exp(-x); }, 1.0, 1e-10);
  CHECK(std::abs(exp_decay.value - 1.0) < 1e-10);

  const IntegralResult lorentzian = integrate_halfline(
      [](double x) { return 1.0 / (1.0 + x * x); }, 1.0, 1e-10);
  CHECK(std::abs(lorentzian.value - kPi / 2.0) < 1e-9);

  const IntegralResult moment = integrate_halfline(
      [](double x) { return x * x * x * std::exp(-2.0 * x); }, 0.5, 1e-10);
  CHECK(std::abs(moment.value - 0.375) < 1e-10);
}

TEST_CASE("2d analytic integrals") {
  const IntegralResult product = integrate_2d_halfline(
      [](double x, double y) { return std::exp(-x - y); }, 1.0, 1.0, 1e-8);
  CHECK(std::abs(product.value - 1.0) < 1e-8);

  const IntegralResult gamma2 = integrate_2d_halfline(
      [](double x, double y) { return x * y * std::exp(-x - y); }, 1.0, 1.0,
      1e-8);
  CHECK(std::abs(gamma2.value - 1.0) < 1e-8);

  const IntegralResult gauss = integrate_2d_halfline(
      [](double x, double y) { return std::exp(-x * x - y * y); }, 1.0, 1.0,
      1e-8);
  CHECK(std::abs(gauss.value - kPi / 4.0) < 1e-8);
}

TEST_CASE("error estimates are honest on the analytic set") {
  struct Case {
    double (*f)(double);
    double scale;
    double exact;
  };
  const Case cases[] = {
      {[](double x) { return std::exp(-x); }, 1.0, 1.0},
      {[](double x) { return 1.0 / (1.0 + x * x); }, 1.0, kPi / 2.0},
      {[](double x) { return x * x * x * std::exp(-2.0 * x); }, 0.5, 0.375},
      {[](double x) { return std::exp(-x * x); }, 1.0,
       std::sqrt(kPi) / 2.0},
      {[](double x) { return std::sqrt(x) * std::exp(-x); }, 1.0,
       std::sqrt(kPi) / 2.0},
  };
  for (const Case& c : cases) {
    for (double tol : {1e-6, 1e-8, 1e-10}) {
      const IntegralResult r = integrate_halfline(c.f, c.scale, tol);
      const double true_error = std::abs(r.value - c.exact);
      CHECK(r.error_estimate <= tol * std::abs(r.value) * 1.0001);
      CHECK(true_error <= 10.0 * std::max(r.error_estimate, 1e-16));
    }
  }
}

TEST_CASE("scale invariance") {
  const double reference =
      integrate_halfline([](double x) { return std::exp(-x) * x; }, 1.0, 1e-10)
          .value;
  for (double s : {1e-3, 1.0, 1e3}) {
    const IntegralResult r = integrate_halfline(
        [s](double x) { return std::exp(-x / s) * (x / s) / s; }, s, 1e-10);
    CHECK(std::abs(r.value - reference) < 1e-10 * std::abs(reference) + 1e-13);
  }
}

TEST_CASE("achieved accuracy follows the requested tolerance") {
  // The adaptive scheme must not wildly overshoot, otherwise audit
  // deviations could not be tuned by the run tolerance.
  auto f = [](double x) { return std::sin(3.0 * x) * std::sin(3.0 * x) *
                                 std::exp(-x) / (1.0 + 0.2 * x); };
  const double tight = integrate_halfline(f, 1.0, 1e-13).value;
  const double loose_err =
      std::abs(integrate_halfline(f, 1.0, 1e-4).value - tight);
  const double mid_err =
      std::abs(integrate_halfline(f, 1.0, 1e-7).value - tight);
  CHECK(loose_err > 1e-12 * std::abs(tight));
  CHECK(mid_err < loose_err);
}

TEST_CASE("non-convergence is reported with the best estimate") {
  bool threw = false;
  try {
    integrate_halfline([](double x) { return std::cos(x * x); }, 1.0, 1e-13,
                       20000);
  } catch (const QuadratureError& e) {
    threw = true;
    CHECK(e.best().evaluations > 0);
    CHECK(e.best().error_estimate > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("determinism") {
  auto f = [](double x) { return std::exp(-x) / (1.0 + x); };
  const IntegralResult a = integrate_halfline(f, 1.0, 1e-9);
  const IntegralResult b = integrate_halfline(f, 1.0, 1e-9);
  CHECK(a.value == b.value);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("multi-component integration shares nodes") {
  const MultiIntegralResult r = integrate_halfline_multi(
      [](double x, double* out) {
        out[0] = std::exp(-x);
        out[1] = x * std::exp(-x);
        out[2] = x * x * std::exp(-x);
      },
      3, 1.0, 1e-10);
  CHECK(std::abs(r.values[0] - 1.0) < 1e-9);
  CHECK(std::abs(r.values[1] - 1.0) < 1e-9);
  CHECK(std::abs(r.values[2] - 2.0) < 1e-9);
}

TEST_SUITE_END();
