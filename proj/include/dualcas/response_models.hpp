// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dualcas/dual_algebra.hpp"

namespace dualcas {

// One Drude-Lorentz oscillator. On the positive imaginary frequency axis it
// contributes omega_p^2 / (omega0^2 + xi^2 + gamma*xi), which is real,
// positive and monotonically decreasing in xi; gamma = 0 (lossless) is
// allowed since no pole is ever reached there.
struct Oscillator {
  double omega_p = 0.0; // rad/s
  double omega0 = 0.0;  // rad/s
  double gamma = 0.0;   // rad/s

  bool operator==(const Oscillator&) const = default;
};

struct MaterialModel {
  std::vector<Oscillator> oscillators_eps;
  std::vector<Oscillator> oscillators_mu;
  std::string name;

  bool is_vacuum() const {
    return oscillators_eps.empty() && oscillators_mu.empty();
  }
  bool operator==(const MaterialModel&) const = default;
};

// One two-level absorption line of an atom: strength * w^2 / (w^2 + xi^2).
struct AtomLine {
  double strength = 0.0; // alpha lines: C^2 m^2/J;  beta lines: J/T^2
  double omega = 0.0;    // rad/s

  bool operator==(const AtomLine&) const = default;
};

struct AtomModel {
  std::vector<AtomLine> alpha_osc;
  std::vector<AtomLine> beta_osc;
  std::string name;

  bool operator==(const AtomModel&) const = default;
};

struct AtomResponse {
  double alpha = 0.0; // C^2 m^2/J
  double beta = 0.0;  // J/T^2
};

struct LocalFieldFactors {
  double c_e = 1.0;
  double c_m = 1.0;
};

void validate(const MaterialModel& model);
void validate(const AtomModel& model);

// eps(i xi), mu(i xi) of the oscillator sums; both real and >= 1.
ResponsePair eval_material(const MaterialModel& model, double xi);

AtomResponse eval_atom(const AtomModel& model, double xi);

// The dual partner of an atom: alpha*(i xi) = beta(i xi)/c^2 and
// beta*(i xi) = c^2 alpha(i xi), exactly, by swapping and rescaling the
// line lists. An exact involution; fixed points have beta = c^2 alpha.
AtomModel dual_atom(const AtomModel& model);

// Linearized dilute-gas contributions to the permittivity and the inverse
// permeability: delta_eps = eta*alpha/eps0, delta_kappa = -eta*beta*mu0.
struct ClausiusMosottiDelta {
  double delta_eps = 0.0;
  double delta_kappa = 0.0;
};
ClausiusMosottiDelta clausius_mosotti_delta(double eta, const AtomModel& atom,
                                            double xi);

// Material realizing the linearized dilute-gas response of a cloud of
// `atom` at number density eta: eps(i xi) = 1 + eta*alpha(i xi)/eps0 exactly
// within the oscillator class, mu(i xi) = 1 + eta*mu0*beta(i xi) to first
// order in eta.
MaterialModel clausius_mosotti_material(double eta, const AtomModel& atom,
                                        const std::string& name = "cm-cloud");

// Real-cavity correction factors c_e = [3 eps/(2 eps+1)]^2,
// c_m = [3/(2 mu+1)]^2 for an atom embedded in the given medium.
LocalFieldFactors local_field_factors(const ResponsePair& resp);

} // namespace dualcas
