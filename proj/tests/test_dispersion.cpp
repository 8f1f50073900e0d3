// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "dualcas/constants.hpp"
#include "dualcas/dispersion.hpp"

using namespace dualcas;

namespace {

MaterialModel constant_material(double eps, double mu) {
  MaterialModel m;
  const double w0 = 1e25;
  if (eps > 1.0)
    m.oscillators_eps.push_back({std::sqrt(eps - 1.0) * w0, w0, 0.0});
  if (mu > 1.0)
    m.oscillators_mu.push_back({std::sqrt(mu - 1.0) * w0, w0, 0.0});
  return m;
}

AtomModel electric_atom(double a0, double w) {
  AtomModel atom;
  atom.alpha_osc.push_back({a0, w});
  return atom;
}

// Closed-form reference values for the fully retarded regime.
double retarded_cp_mirror(double alpha0, double z) {
  return -3.0 * kHbar * kSpeedOfLight * alpha0 /
         (32.0 * kPi * kPi * kEps0 * z * z * z * z);
}

double retarded_vdw_ee(double aA, double aB, double r) {
  return -23.0 * kHbar * kSpeedOfLight * aA * aB /
         (64.0 * kPi * kPi * kPi * kEps0 * kEps0 * std::pow(r, 7));
}

double ideal_casimir(double a) {
  return -kPi * kPi * kHbar * kSpeedOfLight / (240.0 * a * a * a * a);
}

} // namespace

TEST_SUITE_BEGIN("dispersion");

TEST_CASE("inert atom feels nothing") {
  const AtomModel empty;
  const PlanarStack mirror = make_halfspace(constant_material(1e8, 1.0));
  const PotentialBreakdown u = cp_potential(empty, mirror, 1e-7);
  CHECK(u.components.at("e") == 0.0);
  CHECK(u.components.at("m") == 0.0);
  CHECK(u.total == 0.0);

  const PotentialBreakdown v =
      vdw_potential(empty, electric_atom(3e-40, 5e15), 1e-7);
  CHECK(v.total == 0.0);
}

TEST_CASE("retarded atom-mirror potential") {
  const double w1 = 1e16, a0 = 3e-40;
  const AtomModel atom = electric_atom(a0, w1);
  const PlanarStack mirror = make_halfspace(constant_material(1e8, 1.0));
  // fully retarded: w1 z / c = 100
  const double z = 100.0 * kSpeedOfLight / w1;
  const PotentialBreakdown u = cp_potential(atom, mirror, z);
  CHECK(u.total == doctest::Approx(retarded_cp_mirror(a0, z)).epsilon(5e-3));
  CHECK(u.components.at("m") == 0.0);
  CHECK(u.total < 0.0);
}

TEST_CASE("electric atom above a purely magnetic body is repelled") {
  const AtomModel atom = electric_atom(3e-40, 8e15);
  const PlanarStack magnetic = make_halfspace(constant_material(1.0, 4.0));
  for (double z : {5e-8, 3e-7, 2e-6}) {
    const PotentialBreakdown u = cp_potential(atom, magnetic, z);
    CHECK(u.components.at("e") > 0.0);
  }
}

TEST_CASE("cp potential crossover: slope between the two power laws") {
  const double w1 = 1e16;
  const AtomModel atom = electric_atom(3e-40, w1);
  const PlanarStack mirror = make_halfspace(constant_material(1e8, 1.0));
  // log-log slope over the full nonretarded-to-retarded window
  std::vector<double> zs, us;
  for (double t = -2.5; t <= 2.51; t += 0.5)
    zs.push_back(std::pow(10.0, t) * kSpeedOfLight / w1);
  for (double z : zs)
    us.push_back(std::abs(cp_potential(atom, mirror, z).total));
  for (size_t i = 1; i + 1 < zs.size(); ++i) {
    const double slope = (std::log(us[i + 1]) - std::log(us[i - 1])) /
                         (std::log(zs[i + 1]) - std::log(zs[i - 1]));
    CHECK(slope > -4.05);
    CHECK(slope < -2.95);
  }
}

TEST_CASE("retarded two-atom potential and the mixed-pair ratio") {
  const double w1 = 1e16, aA = 3e-40, aB = 2e-40;
  const double c2 = kSpeedOfLight * kSpeedOfLight;
  const AtomModel atom_a = electric_atom(aA, w1);
  AtomModel atom_b = electric_atom(aB, w1);
  atom_b.beta_osc.push_back({c2 * aB, w1}); // beta_B = c^2 alpha_B

  const double r = 100.0 * kSpeedOfLight / w1;
  const PotentialBreakdown u = vdw_potential(atom_a, atom_b, r);
  CHECK(u.components.at("ee") ==
        doctest::Approx(retarded_vdw_ee(aA, aB, r)).epsilon(5e-3));
  CHECK(u.components.at("em") > 0.0);
  CHECK(u.components.at("em") / u.components.at("ee") ==
        doctest::Approx(-7.0 / 23.0).epsilon(5e-3));
  CHECK(u.components.at("me") == 0.0); // atom A carries no magnetic line
}

TEST_CASE("two-atom potential is symmetric under relabeling") {
  AtomModel atom_a = electric_atom(3e-40, 7e15);
  atom_a.beta_osc.push_back({1e-28, 5e15});
  AtomModel atom_b = electric_atom(1.5e-40, 1.2e16);
  atom_b.beta_osc.push_back({4e-29, 9e15});
  const double r = 4e-7;
  const PotentialBreakdown ab = vdw_potential(atom_a, atom_b, r);
  const PotentialBreakdown ba = vdw_potential(atom_b, atom_a, r);
  CHECK(ab.components.at("ee") ==
        doctest::Approx(ba.components.at("ee")).epsilon(1e-12));
  CHECK(ab.components.at("mm") ==
        doctest::Approx(ba.components.at("mm")).epsilon(1e-12));
  CHECK(ab.components.at("em") ==
        doctest::Approx(ba.components.at("me")).epsilon(1e-12));
  CHECK(ab.components.at("me") ==
        doctest::Approx(ba.components.at("em")).epsilon(1e-12));
  CHECK(ab.total == doctest::Approx(ba.total).epsilon(1e-12));
}

TEST_CASE("two-atom potential depends only on the distance") {
  AtomModel atom_a = electric_atom(3e-40, 7e15);
  atom_a.beta_osc.push_back({1e-28, 5e15});
  const AtomModel atom_b = electric_atom(1.5e-40, 1.2e16);
  const double r = 3e-7;
  const PotentialBreakdown axis = vdw_potential(atom_a, atom_b, r);
  // same separation, rotated into a skew direction
  const Vec3 ra{1e-7, -2e-7, 5e-8};
  const Vec3 dir{2.0 / 7.0, 3.0 / 7.0, 6.0 / 7.0}; // unit vector
  const PotentialBreakdown rotated =
      vdw_potential_at(atom_a, atom_b, ra, ra + dir * r);
  CHECK(rotated.total == doctest::Approx(axis.total).epsilon(1e-12));
  for (const char* l : {"ee", "em", "me", "mm"})
    CHECK(rotated.components.at(l) ==
          doctest::Approx(axis.components.at(l)).epsilon(1e-12));
}

TEST_CASE("component bookkeeping sums exactly") {
  AtomModel atom = electric_atom(3e-40, 7e15);
  atom.beta_osc.push_back({1e-28, 5e15});
  const PlanarStack body = make_halfspace(constant_material(3.0, 1.5));
  const PotentialBreakdown u = cp_potential(atom, body, 2e-7);
  CHECK(u.total == u.components.at("e") + u.components.at("m"));
  CHECK(u.error_estimate >= 0.0);
}

TEST_CASE("casimir pressure between vacuum bodies vanishes") {
  const ForceBreakdown f =
      casimir_pressure_planar(MaterialModel{}, MaterialModel{}, 1e-6);
  CHECK(std::abs(f.total) < 1e-20);
}

TEST_CASE("ideal-mirror casimir pressure") {
  const MaterialModel mirror = constant_material(1e8, 1.0);
  const double a = 1e-6;
  const ForceBreakdown f = casimir_pressure_planar(mirror, mirror, a, {}, 1e-7);
  CHECK(f.total == doctest::Approx(ideal_casimir(a)).epsilon(5e-3));
  CHECK(f.total < 0.0);
}

TEST_CASE("mirror facing an infinitely permeable plate repels") {
  const MaterialModel mirror = constant_material(1e8, 1.0);
  const MaterialModel permeable = constant_material(1.0, 1e8);
  const double a = 1e-6;
  const ForceBreakdown f =
      casimir_pressure_planar(mirror, permeable, a, {}, 1e-7);
  CHECK(f.total > 0.0);
  CHECK(f.total ==
        doctest::Approx(-7.0 / 8.0 * ideal_casimir(a)).epsilon(5e-3));
}

TEST_CASE("attraction weakens monotonically with the gap") {
  const MaterialModel glassy = constant_material(2.5, 1.0);
  double prev = 0.0;
  bool first = true;
  for (double a = 1e-7; a < 3e-6; a *= 1.8) {
    const ForceBreakdown f =
        casimir_pressure_planar(glassy, glassy, a, {}, 1e-6);
    CHECK(f.total < 0.0);
    if (!first) CHECK(std::abs(f.total) < prev);
    prev = std::abs(f.total);
    first = false;
  }
}

TEST_CASE("local-field factors are inert in vacuum") {
  AtomModel atom = electric_atom(3e-40, 7e15);
  atom.beta_osc.push_back({1e-28, 5e15});
  const PlanarStack body = make_halfspace(constant_material(3.0, 1.5));
  const PotentialBreakdown off = cp_potential(atom, body, 2e-7, false);
  const PotentialBreakdown on = cp_potential(atom, body, 2e-7, true);
  CHECK(on.total == doctest::Approx(off.total).epsilon(1e-14));

  const AtomModel partner = electric_atom(2e-40, 9e15);
  const PotentialBreakdown voff = vdw_potential(atom, partner, 3e-7, false);
  const PotentialBreakdown von = vdw_potential(atom, partner, 3e-7, true);
  CHECK(von.total == doctest::Approx(voff.total).epsilon(1e-14));
}

TEST_CASE("born route reproduces the cp potential of a dilute slab") {
  // electric probe above an electric cloud
  const AtomModel cloud = electric_atom(4e-40, 8e15);
  const AtomModel probe = electric_atom(3e-40, 1e16);
  const double eta = 1e-8 * kEps0 / 4e-40; // delta eps = 1e-8
  const double thickness = 2e-8;
  const double heights[] = {1.5e-7};
  const auto samples = cp_from_born(eta, cloud, thickness, probe, heights, 1e-9);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].u_born != 0.0);
  CHECK(samples[0].rel_dev < 1e-6);

  // magnetic probe: picks out the magnetic component alone
  AtomModel mag_probe;
  mag_probe.beta_osc.push_back({3e-40 * kSpeedOfLight * kSpeedOfLight, 1e16});
  const auto mag_samples =
      cp_from_born(eta, cloud, thickness, mag_probe, heights, 1e-9);
  CHECK(mag_samples[0].rel_dev < 1e-6);
  // and it must match the magnetic term of the reference potential
  const PlanarStack ref = make_layered(
      MaterialModel{}, {{clausius_mosotti_material(eta, cloud), thickness}},
      MaterialModel{});
  const PotentialBreakdown u = cp_potential(mag_probe, ref, heights[0]);
  CHECK(u.components.at("e") == 0.0);
  CHECK(mag_samples[0].u_reference == doctest::Approx(u.components.at("m")));
}

TEST_CASE("born route rejects non-dilute clouds and an empty cloud is free") {
  const AtomModel cloud = electric_atom(4e-40, 8e15);
  const AtomModel probe = electric_atom(3e-40, 1e16);
  const double heights[] = {1e-7};
  CHECK_THROWS_AS(
      cp_from_born(1e-3 * kEps0 / 4e-40, cloud, 1e-8, probe, heights, 1e-8),
      std::invalid_argument);
  const auto empty = cp_from_born(0.0, cloud, 1e-8, probe, heights, 1e-8);
  CHECK(empty[0].u_born == 0.0);
  CHECK(empty[0].u_reference == 0.0);
}

TEST_SUITE_END();
