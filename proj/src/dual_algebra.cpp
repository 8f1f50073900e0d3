// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualcas/dual_algebra.hpp"

#include <cmath>
#include <stdexcept>

#include "dualcas/constants.hpp"

namespace dualcas {

DualityElement::DualityElement(double scale, double angle) : r(scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("duality scale must be > 0");
  theta = std::fmod(angle, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
}

DualPair make_dual_pair(const Vec3& first, std::string label_first,
                        const Vec3& second, std::string label_second,
                        std::string dimension) {
  if (dimension.empty())
    throw std::invalid_argument("dual pair needs a shared dimension tag");
  return {first, second, std::move(label_first), std::move(label_second),
          std::move(dimension)};
}

Mat2 duality_matrix(const DualityElement& elem) {
  const double c = elem.r * std::cos(elem.theta);
  const double s = elem.r * std::sin(elem.theta);
  return {c, s, -s, c};
}

Mat2 z4_member(int n) {
  int k = n % 4;
  if (k < 0) k += 4;
  switch (k) {
    case 0: return {1.0, 0.0, 0.0, 1.0};
    case 1: return {0.0, 1.0, -1.0, 0.0};
    case 2: return {-1.0, 0.0, 0.0, -1.0};
    default: return {0.0, -1.0, 1.0, 0.0};
  }
}

DualPair transform_pair(const DualPair& pair, const DualityElement& elem) {
  const Mat2 d = duality_matrix(elem);
  DualPair out = pair;
  out.first = pair.first * d.a + pair.second * d.b;
  out.second = pair.first * d.c + pair.second * d.d;
  out.label_first = pair.label_first + "*";
  out.label_second = pair.label_second + "*";
  return out;
}

bool check_invariance_condition(const ResponsePair& resp, double theta) {
  const double off = std::abs(resp.mu - resp.eps) *
                     std::abs(std::sin(theta) * std::cos(theta));
  const double magnitude =
      std::max({std::abs(resp.eps), std::abs(resp.mu), 1.0});
  return off <= kTauAlg * magnitude;
}

ResponsePair transform_response(const ResponsePair& resp, double theta) {
  if (!check_invariance_condition(resp, theta))
    throw std::invalid_argument(
        "duality angle must be a multiple of pi/2 for media with "
        "non-unit relative impedance");
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  return {resp.eps * c2 + resp.mu * s2, resp.eps * s2 + resp.mu * c2};
}

Mat2c excitation_transform_matrix(const ResponsePair& resp,
                                  const DualityElement& elem) {
  if (resp.eps == 0.0 || resp.mu == 0.0)
    throw std::invalid_argument("singular response: eps and mu must be nonzero");
  if (!check_invariance_condition(resp, elem.theta))
    throw std::invalid_argument(
        "element violates the constitutive invariance condition");
  const std::complex<double> i(0.0, 1.0);
  const double c = elem.r * std::cos(elem.theta);
  const double s = elem.r * std::sin(elem.theta);
  const std::complex<double> mu_phase = resp.mu / std::abs(resp.mu);
  const std::complex<double> eps_phase = std::abs(resp.eps) / resp.eps;
  return {c, -i * mu_phase * s, -i * eps_phase * s, c};
}

} // namespace dualcas
