// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace dualcas {

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

// Thrown when an integral fails to meet its tolerance within the
// evaluation budget. Carries the best estimate obtained so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, IntegralResult best)
      : std::runtime_error(what), best_(best) {}
  const IntegralResult& best() const { return best_; }

 private:
  IntegralResult best_;
};

inline constexpr double kDefaultRelTol = 1e-8;      // frequency integrals
inline constexpr double kDefaultInnerRelTol = 1e-9; // wavevector integrals
inline constexpr std::int64_t kMaxEvaluations = 1'000'000;

// Integrates f over (0, inf). The integrand is mapped onto the real line
// with x = scale * exp(v), which matches integrands that peak near x ~ scale
// and decay towards both endpoints, and the transformed integral is then
// evaluated by globally adaptive Gauss-Kronrod 7/15 bisection. Nodes never
// touch x = 0. Deterministic: identical inputs give identical results.
//
// `scale` is the characteristic decay scale of f (> 0). Fails with
// QuadratureError when rel_tol cannot be met within max_evals.
IntegralResult integrate_halfline(const std::function<double(double)>& f,
                                  double scale, double rel_tol = kDefaultRelTol,
                                  std::int64_t max_evals = kMaxEvaluations);

// Iterated integral of f(x, y) over (0, inf)^2; x is the outer variable.
// The inner integral runs at a 10x tighter tolerance so the outer error
// estimate stays honest.
IntegralResult integrate_2d_halfline(
    const std::function<double(double, double)>& f, double scale_x,
    double scale_y, double rel_tol = kDefaultRelTol,
    std::int64_t max_evals = kMaxEvaluations);

// Simultaneous integration of n coupled components sharing one adaptive
// node set (used for matrix-valued integrands where the components come
// from one expensive evaluation). f must write n values to its second
// argument. Convergence is controlled on the summed component magnitudes.
inline constexpr int kMaxComponents = 36;

struct MultiIntegralResult {
  std::array<double, kMaxComponents> values{};
  int n = 0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

MultiIntegralResult integrate_halfline_multi(
    const std::function<void(double, double*)>& f, int n, double scale,
    double rel_tol = kDefaultRelTol, std::int64_t max_evals = kMaxEvaluations);

} // namespace dualcas
