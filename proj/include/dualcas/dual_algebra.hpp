// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <string>

#include "dualcas/linalg.hpp"

namespace dualcas {

// One element of the duality group: a rotation by theta in the space of
// dual field pairs combined with a global rescaling r > 0. theta is stored
// in radians, reduced mod 2*pi on construction.
struct DualityElement {
  double r = 1.0;
  double theta = 0.0;

  DualityElement() = default;
  DualityElement(double scale, double angle);
};

// Two field quantities grouped so a duality rotation acts on them as a
// 2-vector, e.g. (E, Z0*H) or (Z0*D, B). The labels record the physical
// pair; both entries must share one dimension tag after the impedance/c
// rescalings the labels imply.
struct DualPair {
  Vec3 first{};
  Vec3 second{};
  std::string label_first;
  std::string label_second;
  std::string dimension; // shared unit tag, e.g. "V/m"
};

DualPair make_dual_pair(const Vec3& first, std::string label_first,
                        const Vec3& second, std::string label_second,
                        std::string dimension);

// Relative permittivity/permeability pair at one frequency. Entries may be
// complex here (real-frequency use); on the positive imaginary axis the
// oscillator models produce real values >= 1.
struct ResponsePair {
  std::complex<double> eps{1.0, 0.0};
  std::complex<double> mu{1.0, 0.0};
};

// [[r cos, r sin], [-r sin, r cos]] -- the general real matrix commuting
// with the symplectic structure of the field equations.
Mat2 duality_matrix(const DualityElement& elem);

// The four distinct members of the discrete duality group (n mod 4):
// D0 = I, D1 = [[0,1],[-1,0]], D2 = -I, D3 = -D1. Entries exact.
Mat2 z4_member(int n);

// Applies duality_matrix(elem) componentwise; labels gain a star.
DualPair transform_pair(const DualPair& pair, const DualityElement& elem);

// (eps, mu) -> (eps cos^2 + mu sin^2, eps sin^2 + mu cos^2).
// Requires theta to be a multiple of pi/2 unless eps == mu (unit relative
// impedance, where the full rotation group survives).
ResponsePair transform_response(const ResponsePair& resp, double theta);

// True iff the off-diagonal element (mu - eps) sin(theta) cos(theta) of the
// rotated response matrix vanishes within kTauAlg.
bool check_invariance_condition(const ResponsePair& resp, double theta);

// Transform matrix of the bosonic excitation variables:
// [[r cos, -i (mu/|mu|) r sin], [-i (|eps|/eps) r sin, r cos]].
// For real positive eps, mu it satisfies M^dag M = r^2 I, the matrix form
// of the r^2 energy rescaling.
Mat2c excitation_transform_matrix(const ResponsePair& resp,
                                  const DualityElement& elem);

} // namespace dualcas
