// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualcas/dispersion.hpp"

#include <cmath>
#include <stdexcept>

#include "dualcas/constants.hpp"
#include "dualcas/quadrature.hpp"

namespace dualcas {
namespace {

// 16-point Gauss-Legendre rule on [0, 1] for the thin-slab depth integral.
constexpr double kGlx[8] = {0.0052995325041750, 0.0277124884633837,
                            0.0671843988060841, 0.1222977958224985,
                            0.1910618777986781, 0.2709916111713863,
                            0.3591982246103705, 0.4524937450811813};
constexpr double kGlw[8] = {0.0135762297058770, 0.0311267619693239,
                            0.0475792558412464, 0.0623144856277669,
                            0.0747979944082884, 0.0845782596975012,
                            0.0913017075224617, 0.0947253052275342};

double lf_electric(const ResponsePair& resp) {
  return local_field_factors(resp).c_e;
}
double lf_magnetic(const ResponsePair& resp) {
  return local_field_factors(resp).c_m;
}

struct ComponentResult {
  double value = 0.0;
  double error = 0.0;
};

PotentialBreakdown assemble_potential(
    std::map<std::string, ComponentResult> parts, double distance) {
  PotentialBreakdown out;
  out.distance = distance;
  for (auto& [label, part] : parts) {
    out.components[label] = part.value;
    out.total += part.value;
    out.error_estimate += part.error;
  }
  return out;
}

} // namespace

PotentialBreakdown cp_potential(const AtomModel& atom, const PlanarStack& stack,
                                double z_a, bool with_local_field,
                                double rel_tol) {
  validate(stack);
  validate(atom);
  if (!(z_a > 0.0))
    throw std::invalid_argument("atom height must lie inside the source layer");

  const double c2 = kSpeedOfLight * kSpeedOfLight;
  const double prefactor = kHbar / (2.0 * kPi * kEps0);
  const double xi_scale = kSpeedOfLight / (2.0 * z_a);
  const double k_scale = 1.0 / (2.0 * z_a);
  const MaterialModel& host = stack.source_medium();

  std::map<std::string, ComponentResult> parts;
  for (const bool magnetic : {false, true}) {
    auto integrand = [&](double xi) {
      const AtomResponse ar = eval_atom(atom, xi);
      double coupling = magnetic ? ar.beta / c2 : ar.alpha;
      if (coupling == 0.0) return 0.0;
      if (with_local_field) {
        const ResponsePair hr = eval_material(host, xi);
        coupling *= magnetic ? lf_magnetic(hr) : lf_electric(hr);
      }
      const IntegralResult tr = integrate_halfline(
          [&](double k) {
            const CoincidenceIntegrand ci =
                planar_coincidence_integrand(stack, z_a, xi, k);
            return magnetic ? ci.tr_mm : ci.tr_ee;
          },
          k_scale, 0.1 * rel_tol);
      return coupling * tr.value / (4.0 * kPi);
    };
    ComponentResult part;
    // Skip the quadrature entirely for an absent response channel.
    const AtomResponse stat = eval_atom(atom, 0.0);
    if ((magnetic ? stat.beta : stat.alpha) != 0.0) {
      const IntegralResult res =
          integrate_halfline(integrand, xi_scale, rel_tol);
      part.value = prefactor * res.value;
      part.error = prefactor * res.error_estimate;
    }
    parts[magnetic ? "m" : "e"] = part;
  }
  return assemble_potential(std::move(parts), z_a);
}

PotentialBreakdown vdw_potential_at(const AtomModel& atom_a,
                                    const AtomModel& atom_b, const Vec3& r_a,
                                    const Vec3& r_b, bool with_local_field,
                                    const std::optional<MaterialModel>& host,
                                    double rel_tol) {
  validate(atom_a);
  validate(atom_b);
  const double separation = (r_a - r_b).norm();
  if (!(separation > 0.0))
    throw std::invalid_argument("atoms must have nonzero separation");
  const MaterialModel medium = host.value_or(MaterialModel{});
  validate(medium);

  const double c2 = kSpeedOfLight * kSpeedOfLight;
  const double prefactor = -kHbar / (2.0 * kPi * kEps0 * kEps0);
  const double xi_scale = kSpeedOfLight / (2.0 * separation);

  std::map<std::string, ComponentResult> parts;
  for (const bool a_magnetic : {false, true})
    for (const bool b_magnetic : {false, true}) {
      const std::string label = std::string(a_magnetic ? "m" : "e") +
                                (b_magnetic ? "m" : "e");
      auto integrand = [&](double xi) {
        const AtomResponse ra = eval_atom(atom_a, xi);
        const AtomResponse rb = eval_atom(atom_b, xi);
        double coupling = (a_magnetic ? ra.beta / c2 : ra.alpha) *
                          (b_magnetic ? rb.beta / c2 : rb.alpha);
        if (coupling == 0.0) return 0.0;
        const ResponsePair hr = eval_material(medium, xi);
        if (with_local_field)
          coupling *= (a_magnetic ? lf_magnetic(hr) : lf_electric(hr)) *
                      (b_magnetic ? lf_magnetic(hr) : lf_electric(hr));
        const GreenBlocks ab = bulk_blocks(hr, r_a, r_b, xi);
        const GreenBlocks ba = bulk_blocks(hr, r_b, r_a, xi);
        const Mat3& first =
            a_magnetic ? (b_magnetic ? ab.mm : ab.me) : (b_magnetic ? ab.em : ab.ee);
        const Mat3& second =
            b_magnetic ? (a_magnetic ? ba.mm : ba.me) : (a_magnetic ? ba.em : ba.ee);
        return coupling * (first * second).trace();
      };
      ComponentResult part;
      const AtomResponse sa = eval_atom(atom_a, 0.0);
      const AtomResponse sb = eval_atom(atom_b, 0.0);
      const bool active = (a_magnetic ? sa.beta : sa.alpha) != 0.0 &&
                          (b_magnetic ? sb.beta : sb.alpha) != 0.0;
      if (active) {
        const IntegralResult res =
            integrate_halfline(integrand, xi_scale, rel_tol);
        part.value = prefactor * res.value;
        part.error = std::abs(prefactor) * res.error_estimate;
      }
      parts[label] = part;
    }
  return assemble_potential(std::move(parts), separation);
}

PotentialBreakdown vdw_potential(const AtomModel& atom_a,
                                 const AtomModel& atom_b, double separation,
                                 bool with_local_field,
                                 const std::optional<MaterialModel>& host,
                                 double rel_tol) {
  return vdw_potential_at(atom_a, atom_b, Vec3{0.0, 0.0, separation},
                          Vec3{0.0, 0.0, 0.0}, with_local_field, host,
                          rel_tol);
}

ForceBreakdown casimir_pressure_planar(
    const MaterialModel& left, const MaterialModel& right, double gap,
    const std::optional<MaterialModel>& gap_host, double rel_tol) {
  if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
  const PlanarStack cavity =
      make_cavity(left, gap_host.value_or(MaterialModel{}), gap, right);
  const double z0 = 0.5 * gap; // midgap evaluation plane
  const double prefactor = kHbar / (4.0 * kPi * kPi);

  ForceBreakdown out;
  out.gap = gap;
  for (const bool magnetic : {false, true}) {
    const IntegralResult res = integrate_2d_halfline(
        [&](double xi, double k) {
          const CoincidenceIntegrand ci =
              planar_coincidence_integrand(cavity, z0, xi, k);
          return magnetic ? ci.zz_minus_half_tr_mm : ci.zz_minus_half_tr_ee;
        },
        kSpeedOfLight / gap, 1.0 / gap, rel_tol);
    const double value = prefactor * res.value;
    out.components[magnetic ? "m" : "e"] = value;
    out.total += value;
    out.error_estimate += prefactor * res.error_estimate;
  }
  return out;
}

std::vector<BornCpSample> cp_from_born(double eta, const AtomModel& cloud,
                                       double thickness,
                                       const AtomModel& probe,
                                       std::span<const double> heights,
                                       double rel_tol) {
  validate(cloud);
  validate(probe);
  if (!(eta >= 0.0) || !(thickness > 0.0))
    throw std::invalid_argument("need eta >= 0 and positive slab thickness");
  const ClausiusMosottiDelta peak = clausius_mosotti_delta(eta, cloud, 0.0);
  if (peak.delta_eps >= 1e-4 || std::abs(peak.delta_kappa) >= 1e-4)
    throw std::invalid_argument(
        "cloud density outside the dilute regime (delta eps >= 1e-4)");

  const double c2 = kSpeedOfLight * kSpeedOfLight;
  const double prefactor = kHbar / (2.0 * kPi * kEps0);
  const ResponsePair vacuum{1.0, 1.0};

  // Exact reference: probe above the linearized-material slab in vacuum.
  const PlanarStack reference = make_layered(
      MaterialModel{}, {{clausius_mosotti_material(eta, cloud), thickness}},
      MaterialModel{});

  // Trace of the Born-corrected coincidence blocks at height z above the
  // slab top, per unit frequency. Ring contributions are exact for the
  // on-axis trace; the depth integral uses a fixed Gauss rule.
  auto trace_delta = [&](double z, double xi, bool magnetic) {
    const AtomResponse cl = eval_atom(cloud, xi);
    auto depth_value = [&](double zs) {
      const double dist = z + zs; // zs measured down from the slab top
      auto radial = [&](double rho) {
        const Vec3 r{0.0, 0.0, 0.0};
        const Vec3 s{rho, 0.0, -dist};
        const GreenBlocks rs = bulk_blocks(vacuum, r, s, xi);
        const GreenBlocks sr = bulk_blocks(vacuum, s, r, xi);
        double t = 0.0;
        if (!magnetic) {
          if (cl.alpha != 0.0) t += cl.alpha * (rs.ee * sr.ee).trace();
          if (cl.beta != 0.0) t += cl.beta / c2 * (rs.em * sr.me).trace();
        } else {
          if (cl.alpha != 0.0) t += cl.alpha * (rs.me * sr.em).trace();
          if (cl.beta != 0.0) t += cl.beta / c2 * (rs.mm * sr.mm).trace();
        }
        return 2.0 * kPi * rho * t;
      };
      return integrate_halfline(radial, dist, 0.1 * rel_tol).value;
    };
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
      sum += kGlw[i] * depth_value(thickness * kGlx[i]);
      sum += kGlw[i] * depth_value(thickness * (1.0 - kGlx[i]));
    }
    return -(eta / kEps0) * thickness * sum;
  };

  std::vector<BornCpSample> samples;
  samples.reserve(heights.size());
  for (double z : heights) {
    if (!(z > 0.0))
      throw std::invalid_argument("probe heights must be above the slab");
    double u_born = 0.0;
    const AtomResponse stat = eval_atom(probe, 0.0);
    for (const bool magnetic : {false, true}) {
      if ((magnetic ? stat.beta : stat.alpha) == 0.0) continue;
      const IntegralResult res = integrate_halfline(
          [&](double xi) {
            const AtomResponse pr = eval_atom(probe, xi);
            const double coupling = magnetic ? pr.beta / c2 : pr.alpha;
            return coupling * trace_delta(z, xi, magnetic);
          },
          kSpeedOfLight / (2.0 * z), rel_tol);
      u_born += prefactor * res.value;
    }
    const PotentialBreakdown ref =
        cp_potential(probe, reference, z, false, rel_tol);
    const double scale =
        std::max(std::max(std::abs(u_born), std::abs(ref.total)), 1e-300);
    samples.push_back({z, u_born, ref.total,
                       std::abs(u_born - ref.total) / scale});
  }
  return samples;
}

} // namespace dualcas
