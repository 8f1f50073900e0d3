// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualcas/audit.hpp"

#include <cmath>
#include <random>

namespace dualcas {
namespace {

IdentityCheck make_check(const std::string& name, double lhs, double rhs,
                         double tolerance) {
  const double scale = std::max(std::max(std::abs(lhs), std::abs(rhs)), 1e-300);
  const double dev = std::abs(lhs - rhs) / scale;
  return {name, lhs, rhs, dev, dev <= tolerance};
}

void finalize(AuditReport& report) {
  report.overall_pass = true;
  for (const IdentityCheck& c : report.identities)
    report.overall_pass = report.overall_pass && c.pass;
}

IdentityCheck matrix_check(const std::string& name, const Mat3& lhs,
                           const Mat3& rhs, double tolerance) {
  const double scale =
      std::max(std::max(lhs.frobenius(), rhs.frobenius()), 1e-300);
  const double dev = (lhs - rhs).frobenius() / scale;
  return {name, lhs.frobenius(), rhs.frobenius(), dev, dev <= tolerance};
}

MaterialModel tampered(MaterialModel m, double tamper) {
  if (tamper == 0.0) return m;
  if (!m.oscillators_eps.empty())
    m.oscillators_eps.front().omega_p *= 1.0 + tamper;
  else if (!m.oscillators_mu.empty())
    m.oscillators_mu.front().omega_p *= 1.0 + tamper;
  return m;
}

AtomModel tampered(AtomModel a, double tamper) {
  if (tamper == 0.0) return a;
  if (!a.alpha_osc.empty()) a.alpha_osc.front().strength *= 1.0 + tamper;
  else if (!a.beta_osc.empty()) a.beta_osc.front().strength *= 1.0 + tamper;
  return a;
}

PlanarStack tampered(PlanarStack s, double tamper) {
  if (tamper == 0.0) return s;
  for (PlanarLayer& layer : s.layers)
    if (!layer.material.is_vacuum()) {
      layer.material = tampered(layer.material, tamper);
      break;
    }
  return s;
}

} // namespace

AuditReport audit_cp(const CpScenario& scenario, const AuditOptions& options) {
  AuditReport report;
  report.scenario_id = scenario.id;
  report.tolerance = options.tolerance;

  const PotentialBreakdown orig =
      cp_potential(scenario.atom, scenario.stack, scenario.height,
                   scenario.local_field, options.quad_rel_tol);
  const PotentialBreakdown dual = cp_potential(
      tampered(dual_atom(scenario.atom), options.tamper),
      tampered(dual_stack(scenario.stack), options.tamper), scenario.height,
      scenario.local_field, options.quad_rel_tol);

  report.identities.push_back(make_check(
      "U_e*=U_m", dual.components.at("e"), orig.components.at("m"),
      options.tolerance));
  report.identities.push_back(make_check(
      "U_m*=U_e", dual.components.at("m"), orig.components.at("e"),
      options.tolerance));
  report.identities.push_back(
      make_check("U*=U", dual.total, orig.total, options.tolerance));
  finalize(report);
  return report;
}

AuditReport audit_vdw(const VdwScenario& scenario,
                      const AuditOptions& options) {
  AuditReport report;
  report.scenario_id = scenario.id;
  report.tolerance = options.tolerance;

  std::optional<MaterialModel> dual_host;
  if (scenario.host) dual_host = dual_material(*scenario.host);
  const PotentialBreakdown orig = vdw_potential(
      scenario.atom_a, scenario.atom_b, scenario.separation,
      scenario.local_field, scenario.host, options.quad_rel_tol);
  const PotentialBreakdown dual = vdw_potential(
      tampered(dual_atom(scenario.atom_a), options.tamper),
      dual_atom(scenario.atom_b), scenario.separation, scenario.local_field,
      dual_host, options.quad_rel_tol);

  report.identities.push_back(make_check(
      "U_ee*=U_mm", dual.components.at("ee"), orig.components.at("mm"),
      options.tolerance));
  report.identities.push_back(make_check(
      "U_mm*=U_ee", dual.components.at("mm"), orig.components.at("ee"),
      options.tolerance));
  report.identities.push_back(make_check(
      "U_em*=U_me", dual.components.at("em"), orig.components.at("me"),
      options.tolerance));
  report.identities.push_back(make_check(
      "U_me*=U_em", dual.components.at("me"), orig.components.at("em"),
      options.tolerance));
  report.identities.push_back(
      make_check("U*=U", dual.total, orig.total, options.tolerance));
  finalize(report);
  return report;
}

AuditReport audit_casimir(const CasimirScenario& scenario,
                          const AuditOptions& options) {
  AuditReport report;
  report.scenario_id = scenario.id;
  report.tolerance = options.tolerance;
  if (scenario.gap_host && !scenario.gap_host->is_vacuum()) {
    report.outside_paper_claim = true;
    report.note =
        "medium-filled gap: invariance is checked but not covered by the "
        "free-space claim";
  }

  std::optional<MaterialModel> dual_host;
  if (scenario.gap_host) dual_host = dual_material(*scenario.gap_host);
  const ForceBreakdown orig =
      casimir_pressure_planar(scenario.left, scenario.right, scenario.gap,
                              scenario.gap_host, options.quad_rel_tol);
  const ForceBreakdown dual = casimir_pressure_planar(
      tampered(dual_material(scenario.left), options.tamper),
      dual_material(scenario.right), scenario.gap, dual_host,
      options.quad_rel_tol);

  report.identities.push_back(make_check(
      "F_e*=F_m", dual.components.at("e"), orig.components.at("m"),
      options.tolerance));
  report.identities.push_back(make_check(
      "F_m*=F_e", dual.components.at("m"), orig.components.at("e"),
      options.tolerance));
  report.identities.push_back(
      make_check("F*=F", dual.total, orig.total, options.tolerance));
  finalize(report);
  return report;
}

AuditReport audit_green(const GreenAuditScenario& scenario,
                        const AuditOptions& options) {
  AuditReport report;
  report.scenario_id = scenario.id;
  report.tolerance = options.tolerance;

  std::mt19937_64 rng(scenario.seed);
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> logxi(std::log(scenario.xi_min),
                                               std::log(scenario.xi_max));
  const double ell = scenario.length_scale;

  for (int s = 0; s < scenario.samples; ++s) {
    const double xi = std::exp(logxi(rng));
    GreenBlocks blocks, recomputed;
    std::string tag;
    if (scenario.kind == GreenAuditScenario::Kind::bulk) {
      const Vec3 r{sym(rng) * ell, sym(rng) * ell, sym(rng) * ell};
      Vec3 rp{sym(rng) * ell, sym(rng) * ell, sym(rng) * ell};
      if ((r - rp).norm() < 0.05 * ell) rp.z += 0.5 * ell;
      const ResponsePair resp = eval_material(scenario.medium, xi);
      const ResponsePair dual_resp = eval_material(
          tampered(dual_material(scenario.medium), options.tamper), xi);
      blocks = bulk_blocks(resp, r, rp, xi);
      recomputed = bulk_blocks(dual_resp, r, rp, xi);
      blocks = dual_transform_green(blocks, resp, resp);
      tag = "bulk";
    } else {
      const PlanarStack stack =
          make_halfspace(scenario.medium, scenario.host);
      const PlanarStack dual = tampered(dual_stack(stack), options.tamper);
      const Vec3 r{0.0, 0.0, unit(rng) * ell};
      const Vec3 rp{sym(rng) * ell, sym(rng) * ell, unit(rng) * ell};
      const ResponsePair host_resp = eval_material(scenario.host, xi);
      blocks = scattering_blocks(stack, r, rp, xi, kBlockAll,
                                 0.01 * options.tolerance);
      recomputed = scattering_blocks(dual, r, rp, xi, kBlockAll,
                                     0.01 * options.tolerance);
      blocks = dual_transform_green(blocks, host_resp, host_resp);
      tag = "halfspace";
    }
    const std::string base = tag + "[" + std::to_string(s) + "]";
    report.identities.push_back(matrix_check(base + " Gee*=Gee(swap)",
                                             blocks.ee, recomputed.ee,
                                             options.tolerance));
    report.identities.push_back(matrix_check(base + " Gmm*=Gmm(swap)",
                                             blocks.mm, recomputed.mm,
                                             options.tolerance));
    report.identities.push_back(matrix_check(base + " Gem*=Gem(swap)",
                                             blocks.em, recomputed.em,
                                             options.tolerance));
    report.identities.push_back(matrix_check(base + " Gme*=Gme(swap)",
                                             blocks.me, recomputed.me,
                                             options.tolerance));
  }
  finalize(report);
  return report;
}

} // namespace dualcas
