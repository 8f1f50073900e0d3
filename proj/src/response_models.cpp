// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualcas/response_models.hpp"

#include <cmath>
#include <stdexcept>

#include "dualcas/constants.hpp"

namespace dualcas {
namespace {

double oscillator_sum(const std::vector<Oscillator>& oscillators, double xi) {
  double s = 0.0;
  for (const Oscillator& o : oscillators)
    s += o.omega_p * o.omega_p /
         (o.omega0 * o.omega0 + xi * xi + o.gamma * xi);
  return s;
}

double line_sum(const std::vector<AtomLine>& lines, double xi) {
  double s = 0.0;
  for (const AtomLine& l : lines)
    s += l.strength * (l.omega * l.omega / (l.omega * l.omega + xi * xi));
  return s;
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

} // namespace

void validate(const MaterialModel& model) {
  for (const auto* list : {&model.oscillators_eps, &model.oscillators_mu})
    for (const Oscillator& o : *list) {
      require_nonnegative(o.omega_p, "omega_p");
      require_nonnegative(o.omega0, "omega0");
      require_nonnegative(o.gamma, "gamma");
      if (o.omega_p > 0.0 && o.omega0 == 0.0 && o.gamma == 0.0)
        throw std::invalid_argument(
            "oscillator needs omega0 or gamma > 0 to stay finite at xi = 0");
    }
}

void validate(const AtomModel& model) {
  for (const auto* list : {&model.alpha_osc, &model.beta_osc})
    for (const AtomLine& l : *list) {
      require_nonnegative(l.strength, "line strength");
      if (!(l.omega > 0.0))
        throw std::invalid_argument("line frequency must be > 0");
    }
}

ResponsePair eval_material(const MaterialModel& model, double xi) {
  if (!(xi >= 0.0)) throw std::invalid_argument("xi must be >= 0");
  return {1.0 + oscillator_sum(model.oscillators_eps, xi),
          1.0 + oscillator_sum(model.oscillators_mu, xi)};
}

AtomResponse eval_atom(const AtomModel& model, double xi) {
  if (!(xi >= 0.0)) throw std::invalid_argument("xi must be >= 0");
  return {line_sum(model.alpha_osc, xi), line_sum(model.beta_osc, xi)};
}

AtomModel dual_atom(const AtomModel& model) {
  const double c2 = kSpeedOfLight * kSpeedOfLight;
  AtomModel dual;
  dual.name = model.name.empty() ? "dual" : model.name + "-dual";
  dual.alpha_osc.reserve(model.beta_osc.size());
  for (const AtomLine& l : model.beta_osc)
    dual.alpha_osc.push_back({l.strength / c2, l.omega});
  dual.beta_osc.reserve(model.alpha_osc.size());
  for (const AtomLine& l : model.alpha_osc)
    dual.beta_osc.push_back({l.strength * c2, l.omega});
  return dual;
}

ClausiusMosottiDelta clausius_mosotti_delta(double eta, const AtomModel& atom,
                                            double xi) {
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  const AtomResponse r = eval_atom(atom, xi);
  return {eta * r.alpha / kEps0, -eta * r.beta * kMu0};
}

MaterialModel clausius_mosotti_material(double eta, const AtomModel& atom,
                                        const std::string& name) {
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  MaterialModel m;
  m.name = name;
  for (const AtomLine& l : atom.alpha_osc) {
    const double wp2 = eta * l.strength * l.omega * l.omega / kEps0;
    m.oscillators_eps.push_back({std::sqrt(wp2), l.omega, 0.0});
  }
  for (const AtomLine& l : atom.beta_osc) {
    const double wp2 = eta * kMu0 * l.strength * l.omega * l.omega;
    m.oscillators_mu.push_back({std::sqrt(wp2), l.omega, 0.0});
  }
  return m;
}

LocalFieldFactors local_field_factors(const ResponsePair& resp) {
  if (std::abs(2.0 * resp.eps + 1.0) == 0.0 ||
      std::abs(2.0 * resp.mu + 1.0) == 0.0)
    throw std::invalid_argument("local-field factor denominator vanishes");
  const double eps = resp.eps.real();
  const double mu = resp.mu.real();
  const double ce = 3.0 * eps / (2.0 * eps + 1.0);
  const double cm = 3.0 / (2.0 * mu + 1.0);
  return {ce * ce, cm * cm};
}

} // namespace dualcas
