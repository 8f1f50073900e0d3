// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "dualcas/constants.hpp"
#include "dualcas/dual_algebra.hpp"

using namespace dualcas;

TEST_SUITE_BEGIN("dual_algebra");

TEST_CASE("duality matrix values") {
  const Mat2 quarter = duality_matrix(DualityElement(1.0, kPi / 2.0));
  CHECK(std::abs(quarter.a) < 1e-15);
  CHECK(quarter.b == doctest::Approx(1.0));
  CHECK(quarter.c == doctest::Approx(-1.0));
  CHECK(std::abs(quarter.d) < 1e-15);

  const Mat2 ident = duality_matrix(DualityElement(1.0, 0.0));
  CHECK((ident - Mat2::identity()).max_abs() == 0.0);

  const Mat2 neg = duality_matrix(DualityElement(2.0, kPi));
  CHECK(neg.a == doctest::Approx(-2.0));
  CHECK(std::abs(neg.b) < 1e-15);
  CHECK(std::abs(neg.c) < 1e-15);
  CHECK(neg.d == doctest::Approx(-2.0));
}

TEST_CASE("z4 members") {
  const Mat2 d1 = z4_member(1);
  CHECK(d1.a == 0.0);
  CHECK(d1.b == 1.0);
  CHECK(d1.c == -1.0);
  CHECK(d1.d == 0.0);
  CHECK((z4_member(4) - Mat2::identity()).max_abs() == 0.0);
  const Mat2 d3 = z4_member(3);
  CHECK(d3.b == -1.0);
  CHECK(d3.c == 1.0);
  CHECK((z4_member(-1) - z4_member(3)).max_abs() == 0.0);
}

TEST_CASE("z4 closure is exact") {
  const Mat2 d1 = z4_member(1);
  const Mat2 fourth = d1 * d1 * d1 * d1;
  CHECK((fourth - Mat2::identity()).max_abs() == 0.0);
}

TEST_CASE("group law and symplectic commutation") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  const Mat2 symplectic{0.0, 1.0, -1.0, 0.0};
  for (int i = 0; i < 50; ++i) {
    const DualityElement a(scale(rng), angle(rng));
    const DualityElement b(scale(rng), angle(rng));
    const Mat2 product = duality_matrix(a) * duality_matrix(b);
    const Mat2 composed =
        duality_matrix(DualityElement(a.r * b.r, a.theta + b.theta));
    CHECK((product - composed).max_abs() <= kTauAlg * a.r * b.r * 4.0);

    const Mat2 lhs = duality_matrix(a) * symplectic;
    const Mat2 rhs = symplectic * duality_matrix(a);
    CHECK((lhs - rhs).max_abs() <= kTauAlg * a.r);
  }
}

TEST_CASE("transform_pair realizes the field swaps") {
  const Vec3 e{1.0, 2.0, 3.0};
  const Vec3 h{-4.0, 0.5, 2.0};
  const DualPair pair = make_dual_pair(e, "E", h, "Z0*H", "V/m");

  const DualPair quarter = transform_pair(pair, DualityElement(1.0, kPi / 2.0));
  CHECK((quarter.first - h).norm() < 1e-15 * h.norm());
  CHECK((quarter.second + e).norm() < 1e-15 * e.norm());
  CHECK(quarter.label_first == "E*");

  const DualPair same = transform_pair(pair, DualityElement(1.0, 0.0));
  CHECK((same.first - e).norm() == 0.0);
  CHECK((same.second - h).norm() == 0.0);

  // atomic polarization/magnetization pair behaves identically
  const DualPair atom = make_dual_pair(e, "P_A", h, "M_A/c", "C/m^2");
  const DualPair atom_star = transform_pair(atom, DualityElement(1.0, kPi / 2.0));
  CHECK((atom_star.first - h).norm() < 1e-15 * h.norm());
  CHECK((atom_star.second + e).norm() < 1e-15 * e.norm());
}

TEST_CASE("transform_response values and involution") {
  const ResponsePair swapped = transform_response({2.0, 1.0}, kPi / 2.0);
  CHECK(swapped.eps.real() == doctest::Approx(1.0));
  CHECK(swapped.mu.real() == doctest::Approx(2.0));

  const ResponsePair same = transform_response({2.0, 1.0}, 0.0);
  CHECK(same.eps.real() == doctest::Approx(2.0));
  CHECK(same.mu.real() == doctest::Approx(1.0));

  // perfect-lens medium is a fixed point at any angle
  const ResponsePair lens = transform_response({-1.0, -1.0}, 0.77);
  CHECK(lens.eps.real() == doctest::Approx(-1.0));
  CHECK(lens.mu.real() == doctest::Approx(-1.0));

  const ResponsePair twice =
      transform_response(transform_response({2.0, 1.0}, kPi / 2.0), kPi / 2.0);
  CHECK(std::abs(twice.eps - std::complex<double>(2.0)) < kTauAlg);
  CHECK(std::abs(twice.mu - std::complex<double>(1.0)) < kTauAlg);
}

TEST_CASE("invariance condition") {
  CHECK(check_invariance_condition({1.5, 1.5}, 0.3));
  CHECK(check_invariance_condition({2.0, 1.0}, kPi / 2.0));
  CHECK_FALSE(check_invariance_condition({2.0, 1.0}, kPi / 4.0));
}

TEST_CASE("transform_response rejects angles breaking the constitutive law") {
  CHECK_THROWS_AS(transform_response({2.0, 1.0}, kPi / 4.0),
                  std::invalid_argument);
}

TEST_CASE("excitation transform matrix") {
  const ResponsePair resp{2.0, 3.0};
  const Mat2c quarter =
      excitation_transform_matrix(resp, DualityElement(1.0, kPi / 2.0));
  CHECK(std::abs(quarter.a) < 1e-15);
  CHECK(std::abs(quarter.b - std::complex<double>(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(quarter.c - std::complex<double>(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(quarter.d) < 1e-15);

  const Mat2c ident =
      excitation_transform_matrix(resp, DualityElement(1.0, 0.0));
  CHECK((ident - Mat2c::identity()).max_abs() < 1e-15);

  CHECK_THROWS_AS(
      excitation_transform_matrix({0.0, 1.0}, DualityElement(1.0, 0.0)),
      std::invalid_argument);
}

TEST_CASE("hamiltonian rescaling M^dag M = r^2 I") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.1, 8.0);
  for (int i = 0; i < 20; ++i) {
    const ResponsePair resp{pos(rng), pos(rng)};
    const double r = pos(rng);
    // equal response allows the continuous angles; otherwise quarter turns
    const double theta = (i % 2 == 0) ? (i % 4) * kPi / 2.0 : 0.0;
    const Mat2c m = excitation_transform_matrix(
        {resp.eps, resp.eps}, DualityElement(r, kPi / 3.0));
    Mat2c gram = m.adjoint() * m;
    gram.a -= r * r;
    gram.d -= r * r;
    CHECK(gram.max_abs() <= kTauAlg * r * r * 10.0);

    const Mat2c md =
        excitation_transform_matrix(resp, DualityElement(r, theta));
    Mat2c gram2 = md.adjoint() * md;
    gram2.a -= r * r;
    gram2.d -= r * r;
    CHECK(gram2.max_abs() <= kTauAlg * r * r * 10.0);
  }

  // the worked 2x case: r = 2, theta = pi/3 on an equal-response medium
  const Mat2c m =
      excitation_transform_matrix({1.5, 1.5}, DualityElement(2.0, kPi / 3.0));
  const Mat2c gram = m.adjoint() * m;
  CHECK(std::abs(gram.a - 4.0) < 1e-14);
  CHECK(std::abs(gram.d - 4.0) < 1e-14);
  CHECK(std::abs(gram.b) < 1e-14);
  CHECK(std::abs(gram.c) < 1e-14);
}

TEST_SUITE_END();
