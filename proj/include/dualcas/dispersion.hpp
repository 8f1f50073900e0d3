// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dualcas/green.hpp"

namespace dualcas {

// Ground-state interaction energy split into its electric/magnetic parts.
// Keys are "e"/"m" for atom-body potentials and "ee"/"em"/"me"/"mm" for
// two-atom potentials; total is their exact sum.
struct PotentialBreakdown {
  std::map<std::string, double> components; // J
  double total = 0.0;                       // J
  double distance = 0.0;                    // m
  double error_estimate = 0.0;              // J
};

struct ForceBreakdown {
  std::map<std::string, double> components; // N/m^2
  double total = 0.0;
  double gap = 0.0;
  double error_estimate = 0.0;
};

// Atom-body potential at height z_a inside the source-side medium of the
// stack: U_l = hbar/(2 pi eps0) Int dxi [c_l] a_l Tr G^(1)_ll(z_a, z_a),
// with a_e = alpha, a_m = beta/c^2, and the real-cavity factors applied
// when with_local_field is set (they are exactly 1 in vacuum).
PotentialBreakdown cp_potential(const AtomModel& atom, const PlanarStack& stack,
                                double z_a, bool with_local_field = false,
                                double rel_tol = kDefaultRelTol);

// Two-atom potential at given positions in free space or a homogeneous
// host: U_ll' = -hbar/(2 pi eps0^2) Int dxi [c_l c_l'] a_l a_l'
// Tr[G_ll'(rA,rB) G_l'l(rB,rA)], for all four component pairs.
PotentialBreakdown vdw_potential_at(
    const AtomModel& atom_a, const AtomModel& atom_b, const Vec3& r_a,
    const Vec3& r_b, bool with_local_field = false,
    const std::optional<MaterialModel>& host = std::nullopt,
    double rel_tol = kDefaultRelTol);

PotentialBreakdown vdw_potential(
    const AtomModel& atom_a, const AtomModel& atom_b, double separation,
    bool with_local_field = false,
    const std::optional<MaterialModel>& host = std::nullopt,
    double rel_tol = kDefaultRelTol);

// Pressure between two half-spaces across a gap, evaluated as the
// frequency/transverse-wavevector double integral of the zz stress
// combination of the cavity blocks on the midgap plane. Negative values
// mean attraction. The per-component values retain the single-interface
// contributions, which cancel in the total.
ForceBreakdown casimir_pressure_planar(
    const MaterialModel& left, const MaterialModel& right, double gap,
    const std::optional<MaterialModel>& gap_host = std::nullopt,
    double rel_tol = kDefaultRelTol);

// Consistency chain through the linear Born correction: the potential of a
// probe atom above a thin dilute cloud (slab of thickness `thickness`,
// density eta, atoms `cloud`, in free space) is reconstructed from the
// traces of the Born-corrected Green blocks at coincidence and compared
// with cp_potential on the equivalent linearized material stack.
struct BornCpSample {
  double height = 0.0;      // above the slab top
  double u_born = 0.0;      // J, Born route
  double u_reference = 0.0; // J, exact multilayer route
  double rel_dev = 0.0;
};

std::vector<BornCpSample> cp_from_born(double eta, const AtomModel& cloud,
                                       double thickness,
                                       const AtomModel& probe,
                                       std::span<const double> heights,
                                       double rel_tol = 1e-9);

} // namespace dualcas
