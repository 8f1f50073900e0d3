// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualcas/green.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dualcas/constants.hpp"

namespace dualcas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RealResp {
  double eps, mu;
};

RealResp real_response(const ResponsePair& resp) {
  if (std::abs(resp.eps.imag()) > kTauAlg * std::abs(resp.eps) ||
      std::abs(resp.mu.imag()) > kTauAlg * std::abs(resp.mu))
    throw std::invalid_argument(
        "imaginary-axis response must be real");
  if (!(resp.eps.real() > 0.0) || !(resp.mu.real() > 0.0))
    throw std::invalid_argument(
        "imaginary-axis response must be positive");
  return {resp.eps.real(), resp.mu.real()};
}

void require_positive_xi(double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be > 0");
}

// Radial pieces of the homogeneous-medium tensor (without the mu factor):
// G0 = A I + B uu, curl G0 = [gp u]_x.
struct BulkRadial {
  double A, B, gp;
};

BulkRadial bulk_radial(double q, double R) {
  const double x = q * R;
  const double g = std::exp(-x) / (4.0 * kPi * R);
  const double inv = 1.0 / x;
  return {g * (1.0 + inv + inv * inv),
          -g * (1.0 + 3.0 * inv + 3.0 * inv * inv),
          -g * (q + 1.0 / R)};
}

double wavenumber_q(const RealResp& rr, double xi) {
  return std::sqrt(rr.eps * rr.mu) * xi / kSpeedOfLight;
}

// --- planar k-space machinery ------------------------------------------------

struct LayerSlice {
  double eps, mu, kappa;
};

struct KSlice {
  double k = 0.0, xi = 0.0;
  double kappa = 0.0, kbar = 0.0; // source layer
  double eps = 0.0, mu = 0.0;     // source layer
  double d = kInf;                // source layer thickness
  bool has_up = false;
  PolRefl r_dn, r_up;
};

PolRefl fresnel_slices(const LayerSlice& inc, const LayerSlice& sub) {
  return {(sub.mu * inc.kappa - inc.mu * sub.kappa) /
              (sub.mu * inc.kappa + inc.mu * sub.kappa),
          (sub.eps * inc.kappa - inc.eps * sub.kappa) /
              (sub.eps * inc.kappa + inc.eps * sub.kappa)};
}

std::vector<LayerSlice> slice_layers(const PlanarStack& stack, double k,
                                     double xi) {
  std::vector<LayerSlice> slices;
  slices.reserve(stack.layers.size());
  for (const PlanarLayer& layer : stack.layers) {
    const RealResp rr = real_response(eval_material(layer.material, xi));
    const double kbar = std::sqrt(rr.eps * rr.mu) * xi / kSpeedOfLight;
    slices.push_back({rr.eps, rr.mu, std::hypot(k, kbar)});
  }
  return slices;
}

PolRefl reflection_down(const PlanarStack& stack,
                        const std::vector<LayerSlice>& sl, int src) {
  const int n = static_cast<int>(sl.size());
  double rs = 0.0, rp = 0.0;
  for (int i = n - 2; i >= src; --i) {
    const PolRefl step = fresnel_slices(sl[i], sl[i + 1]);
    if (i == n - 2) {
      rs = step.rs;
      rp = step.rp;
    } else {
      const double e = std::exp(-2.0 * sl[i + 1].kappa *
                                stack.layers[i + 1].thickness);
      rs = (step.rs + rs * e) / (1.0 + step.rs * rs * e);
      rp = (step.rp + rp * e) / (1.0 + step.rp * rp * e);
    }
  }
  return {rs, rp};
}

PolRefl reflection_up(const PlanarStack& stack,
                      const std::vector<LayerSlice>& sl, int src) {
  if (src == 0) return {0.0, 0.0};
  double rs = 0.0, rp = 0.0;
  for (int i = 1; i <= src; ++i) {
    const PolRefl step = fresnel_slices(sl[i], sl[i - 1]);
    if (i == 1) {
      rs = step.rs;
      rp = step.rp;
    } else {
      const double e = std::exp(-2.0 * sl[i - 1].kappa *
                                stack.layers[i - 1].thickness);
      rs = (step.rs + rs * e) / (1.0 + step.rs * rs * e);
      rp = (step.rp + rp * e) / (1.0 + step.rp * rp * e);
    }
  }
  return {rs, rp};
}

KSlice make_kslice(const PlanarStack& stack, double xi, double k) {
  const std::vector<LayerSlice> sl = slice_layers(stack, k, xi);
  const int src = stack.source_layer;
  KSlice ks;
  ks.k = k;
  ks.xi = xi;
  ks.eps = sl[src].eps;
  ks.mu = sl[src].mu;
  ks.kappa = sl[src].kappa;
  ks.kbar = std::sqrt(sl[src].eps * sl[src].mu) * xi / kSpeedOfLight;
  ks.has_up = src > 0;
  ks.d = ks.has_up ? stack.layers[src].thickness : kInf;
  ks.r_dn = reflection_down(stack, sl, src);
  ks.r_up = ks.has_up ? reflection_up(stack, sl, src) : PolRefl{};
  return ks;
}

// One multiple-reflection term of the angular spectrum: the propagation
// directions at the field/source point and its resummed weight.
struct ScatterTerm {
  int sf, ss;
  double w;
};

// Fills up to 4 terms for one polarization; returns the count.
int scatter_terms(const KSlice& ks, double r_dn, double r_up, double z,
                  double zp, ScatterTerm out[4]) {
  int n = 0;
  if (!ks.has_up) {
    out[n++] = {+1, -1, r_dn * std::exp(-ks.kappa * (z + zp))};
    return n;
  }
  const double denom = 1.0 - r_dn * r_up * std::exp(-2.0 * ks.kappa * ks.d);
  const double rr = r_dn * r_up;
  out[n++] = {+1, -1, r_dn * std::exp(-ks.kappa * (z + zp)) / denom};
  out[n++] = {-1, +1,
              r_up * std::exp(-ks.kappa * (2.0 * ks.d - z - zp)) / denom};
  out[n++] = {+1, +1,
              rr * std::exp(-ks.kappa * (2.0 * ks.d + z - zp)) / denom};
  out[n++] = {-1, -1,
              rr * std::exp(-ks.kappa * (2.0 * ks.d - z + zp)) / denom};
  return n;
}

// Azimuthally integrated polarization dyads in the frame whose x axis is
// the lateral separation; jn are Bessel J_n(k rho). "p" polarization
// vectors depend on the vertical propagation direction (sf, ss = +-1).
Mat3 angular_dyad(bool pf, int sf, bool ps, int ss, const KSlice& ks,
                  double j0, double j1, double j2) {
  const double c0m = 0.5 * (j0 - j2);
  const double c0p = 0.5 * (j0 + j2);
  Mat3 m = Mat3::zero();
  if (!pf && !ps) { // s (x) s
    m(0, 0) = c0p;
    m(1, 1) = c0m;
  } else if (pf && ps) { // p (x) p
    const double kb2 = ks.kbar * ks.kbar;
    const double t = sf * ss * ks.kappa * ks.kappa / kb2;
    m(0, 0) = t * c0m;
    m(1, 1) = t * c0p;
    m(0, 2) = -(ks.k * ks.kappa / kb2) * j1 * sf;
    m(2, 0) = -(ks.k * ks.kappa / kb2) * j1 * ss;
    m(2, 2) = -(ks.k * ks.k / kb2) * j0;
  } else if (pf && !ps) { // p (x) s
    m(0, 1) = sf * (ks.kappa / ks.kbar) * c0m;
    m(1, 0) = -sf * (ks.kappa / ks.kbar) * c0p;
    m(2, 1) = -(ks.k / ks.kbar) * j1;
  } else { // s (x) p
    m(0, 1) = -ss * (ks.kappa / ks.kbar) * c0p;
    m(1, 0) = ss * (ks.kappa / ks.kbar) * c0m;
    m(1, 2) = -(ks.k / ks.kbar) * j1;
  }
  return m;
}

struct BlockRequest {
  bool curl_left, curl_right;
  double weight; // frequency factor of the block
};

// Sum of all scattering terms for one block request at one k node,
// in the rotated frame, including the mu_src (k/kappa) measure.
Mat3 k_integrand(const KSlice& ks, const BlockRequest& req, double z,
                 double zp, double j0, double j1, double j2) {
  Mat3 sum = Mat3::zero();
  for (int pol = 0; pol < 2; ++pol) {
    const bool sigma_p = pol == 1;
    const double r_dn = sigma_p ? ks.r_dn.rp : ks.r_dn.rs;
    const double r_up = sigma_p ? ks.r_up.rp : ks.r_up.rs;
    ScatterTerm terms[4];
    const int n = scatter_terms(ks, r_dn, r_up, z, zp, terms);
    for (int t = 0; t < n; ++t) {
      bool pf = sigma_p, ps = sigma_p;
      double fac = terms[t].w;
      if (req.curl_left) {
        fac *= pf ? -ks.kbar : ks.kbar;
        pf = !pf;
      }
      if (req.curl_right) {
        fac *= ps ? -ks.kbar : ks.kbar;
        ps = !ps;
      }
      sum += fac * angular_dyad(pf, terms[t].sf, ps, terms[t].ss, ks, j0, j1,
                                j2);
    }
  }
  return (ks.mu * ks.k / ks.kappa) * sum;
}

void bessel_triplet(double a, double& j0, double& j1, double& j2) {
  if (a < 1e-8) {
    j0 = 1.0;
    j1 = 0.5 * a;
    j2 = 0.125 * a * a;
    return;
  }
  j0 = std::cyl_bessel_j(0, a);
  j1 = std::cyl_bessel_j(1, a);
  j2 = 2.0 * j1 / a - j0;
}

void check_source_heights(const PlanarStack& stack, double z, double zp) {
  if (!(z > 0.0) || !(zp > 0.0))
    throw std::invalid_argument("heights must lie inside the source layer");
  if (stack.source_layer > 0) {
    const double d = stack.layers[stack.source_layer].thickness;
    if (!(z < d) || !(zp < d))
      throw std::invalid_argument("heights must lie inside the source layer");
  }
}

// Adaptive radial integration of a set of block requests; returns one 3x3
// matrix per request, in the global frame.
std::vector<Mat3> assemble_planar(const PlanarStack& stack, double z,
                                  double zp, double lat_x, double lat_y,
                                  double xi, double rel_tol,
                                  const std::vector<BlockRequest>& requests) {
  require_positive_xi(xi);
  check_source_heights(stack, z, zp);
  const double rho = std::hypot(lat_x, lat_y);
  const int nreq = static_cast<int>(requests.size());

  double min_dist = z + zp;
  if (stack.source_layer > 0)
    min_dist =
        std::min(min_dist, 2.0 * stack.layers[stack.source_layer].thickness -
                               (z + zp));
  const double scale_k = 1.0 / min_dist;

  auto f = [&](double k, double* out) {
    const KSlice ks = make_kslice(stack, xi, k);
    double j0, j1, j2;
    bessel_triplet(k * rho, j0, j1, j2);
    for (int q = 0; q < nreq; ++q) {
      const Mat3 m = k_integrand(ks, requests[q], z, zp, j0, j1, j2);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[9 * q + 3 * i + j] = m(i, j);
    }
  };

  MultiIntegralResult res =
      integrate_halfline_multi(f, 9 * nreq, scale_k, rel_tol);

  std::vector<Mat3> blocks(nreq);
  for (int q = 0; q < nreq; ++q) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = res.values[9 * q + 3 * i + j] / (4.0 * kPi);
    if (rho > 0.0) {
      const double psi = std::atan2(lat_y, lat_x);
      Mat3 q3 = Mat3::identity();
      q3(0, 0) = std::cos(psi);
      q3(0, 1) = -std::sin(psi);
      q3(1, 0) = std::sin(psi);
      q3(1, 1) = std::cos(psi);
      m = q3 * m * q3.transpose();
    }
    blocks[q] = m;
  }
  return blocks;
}

MaterialModel vacuum_material() { return MaterialModel{{}, {}, "vacuum"}; }

Mat3 ring_average(const Mat3& m) {
  Mat3 r = Mat3::zero();
  r(0, 0) = r(1, 1) = 0.5 * (m(0, 0) + m(1, 1));
  r(0, 1) = 0.5 * (m(0, 1) - m(1, 0));
  r(1, 0) = -r(0, 1);
  r(2, 2) = m(2, 2);
  return r;
}

Mat3 born_sum(const DensityGrid& grid, double alpha, double beta,
              const GreenBlocksProvider& background, const Vec3& r,
              const Vec3& r_prime, double xi) {
  const double c2 = kSpeedOfLight * kSpeedOfLight;
  unsigned mask_r = 0, mask_s = 0;
  if (alpha != 0.0) {
    mask_r |= kBlockEE;
    mask_s |= kBlockEE;
  }
  if (beta != 0.0) {
    mask_r |= kBlockEM;
    mask_s |= kBlockME;
  }
  Mat3 sum = Mat3::zero();
  for (int iz = 0; iz < grid.nz; ++iz)
    for (int iy = 0; iy < grid.ny; ++iy)
      for (int ix = 0; ix < grid.nx; ++ix) {
        const double eta = grid.values[(iz * grid.ny + iy) * grid.nx + ix];
        if (eta == 0.0) continue;
        const Vec3 s = grid.cell_center(ix, iy, iz);
        const GreenBlocks from = background.blocks(r, s, xi, mask_r);
        const GreenBlocks to = background.blocks(s, r_prime, xi, mask_s);
        Mat3 p = Mat3::zero();
        if (alpha != 0.0) p += (c2 * alpha) * (from.ee * to.ee);
        if (beta != 0.0) p += beta * (from.em * to.me);
        if (grid.layout == DensityGrid::Layout::cylindrical)
          p = ring_average(p);
        sum += (eta * grid.cell_volume(ix, iy, iz)) * p;
      }
  return sum * (-1.0 / (kEps0 * xi * xi));
}

// Halves every direction with an even cell count > 1; densities are
// volume-weight-averaged. Returns false when nothing can be coarsened.
bool coarsen_grid(const DensityGrid& grid, DensityGrid& out) {
  const bool cx = grid.nx > 1 && grid.nx % 2 == 0;
  const bool cy = grid.ny > 1 && grid.ny % 2 == 0;
  const bool cz = grid.nz > 1 && grid.nz % 2 == 0;
  if (!cx && !cy && !cz) return false;
  out = grid;
  out.nx = cx ? grid.nx / 2 : grid.nx;
  out.ny = cy ? grid.ny / 2 : grid.ny;
  out.nz = cz ? grid.nz / 2 : grid.nz;
  out.dx = cx ? 2.0 * grid.dx : grid.dx;
  out.dy = cy ? 2.0 * grid.dy : grid.dy;
  out.dz = cz ? 2.0 * grid.dz : grid.dz;
  out.values.assign(static_cast<size_t>(out.nx) * out.ny * out.nz, 0.0);
  std::vector<double> volume(out.values.size(), 0.0);
  for (int iz = 0; iz < grid.nz; ++iz)
    for (int iy = 0; iy < grid.ny; ++iy)
      for (int ix = 0; ix < grid.nx; ++ix) {
        const int jx = cx ? ix / 2 : ix;
        const int jy = cy ? iy / 2 : iy;
        const int jz = cz ? iz / 2 : iz;
        const size_t j = (static_cast<size_t>(jz) * out.ny + jy) * out.nx + jx;
        const double v = grid.cell_volume(ix, iy, iz);
        out.values[j] += v * grid.values[(iz * grid.ny + iy) * grid.nx + ix];
        volume[j] += v;
      }
  for (size_t j = 0; j < out.values.size(); ++j)
    if (volume[j] > 0.0) out.values[j] /= volume[j];
  return true;
}

} // namespace

// --- stack -------------------------------------------------------------------

std::optional<MaterialModel> PlanarStack::atom_side_host() const {
  const MaterialModel& m = layers.front().material;
  if (m.is_vacuum()) return std::nullopt;
  return m;
}

void validate(const PlanarStack& stack) {
  if (stack.layers.size() < 2)
    throw std::invalid_argument("stack needs at least the two outer media");
  for (size_t i = 0; i < stack.layers.size(); ++i) {
    const PlanarLayer& layer = stack.layers[i];
    const bool outer = i == 0 || i + 1 == stack.layers.size();
    if (layer.semi_infinite != outer)
      throw std::invalid_argument(
          "exactly the two outermost layers are semi-infinite");
    if (!outer && !(layer.thickness > 0.0))
      throw std::invalid_argument("interior layers need positive thickness");
    validate(layer.material);
  }
  if (stack.source_layer < 0 ||
      stack.source_layer + 1 >= static_cast<int>(stack.layers.size()))
    throw std::invalid_argument("source layer out of range");
}

PlanarStack make_halfspace(MaterialModel body, MaterialModel host) {
  PlanarStack s;
  s.layers.push_back({std::move(host), 0.0, true});
  s.layers.push_back({std::move(body), 0.0, true});
  s.source_layer = 0;
  validate(s);
  return s;
}

PlanarStack make_layered(MaterialModel host,
                         std::vector<std::pair<MaterialModel, double>> slabs,
                         MaterialModel bottom) {
  PlanarStack s;
  s.layers.push_back({std::move(host), 0.0, true});
  for (auto& [material, thickness] : slabs)
    s.layers.push_back({std::move(material), thickness, false});
  s.layers.push_back({std::move(bottom), 0.0, true});
  s.source_layer = 0;
  validate(s);
  return s;
}

PlanarStack make_cavity(MaterialModel top_body, MaterialModel gap_medium,
                        double gap, MaterialModel bottom_body) {
  PlanarStack s;
  s.layers.push_back({std::move(top_body), 0.0, true});
  s.layers.push_back({std::move(gap_medium), gap, false});
  s.layers.push_back({std::move(bottom_body), 0.0, true});
  s.source_layer = 1;
  validate(s);
  return s;
}

MaterialModel dual_material(const MaterialModel& m) {
  MaterialModel dual = m;
  std::swap(dual.oscillators_eps, dual.oscillators_mu);
  if (!dual.name.empty()) dual.name += "-dual";
  return dual;
}

PlanarStack dual_stack(const PlanarStack& stack) {
  PlanarStack dual = stack;
  for (PlanarLayer& layer : dual.layers) layer.material = dual_material(layer.material);
  return dual;
}

// --- bulk --------------------------------------------------------------------

Mat3 bulk_green(const ResponsePair& resp, const Vec3& separation, double xi) {
  require_positive_xi(xi);
  const double R = separation.norm();
  if (R < kCoincidenceGuard)
    throw std::invalid_argument("coincident points in bulk Green tensor");
  const RealResp rr = real_response(resp);
  const double q = wavenumber_q(rr, xi);
  const BulkRadial rad = bulk_radial(q, R);
  const Vec3 u = separation * (1.0 / R);
  return rr.mu * (rad.A * Mat3::identity() + rad.B * Mat3::outer(u, u));
}

GreenBlocks bulk_blocks(const ResponsePair& resp, const Vec3& r,
                        const Vec3& r_prime, double xi, unsigned mask) {
  require_positive_xi(xi);
  const Vec3 sep = r - r_prime;
  const double R = sep.norm();
  if (R < kCoincidenceGuard)
    throw std::invalid_argument("coincident points in bulk Green tensor");
  const RealResp rr = real_response(resp);
  const double q = wavenumber_q(rr, xi);
  const BulkRadial rad = bulk_radial(q, R);
  const Vec3 u = sep * (1.0 / R);
  const Mat3 g =
      rr.mu * (rad.A * Mat3::identity() + rad.B * Mat3::outer(u, u));
  const Mat3 curl = rr.mu * Mat3::cross_matrix(u * rad.gp);
  const double w = xi / kSpeedOfLight;

  GreenBlocks blocks;
  blocks.part = GreenPart::full;
  blocks.r = r;
  blocks.r_prime = r_prime;
  blocks.xi = xi;
  if (mask & kBlockEE) blocks.ee = (w * w) * g;
  if (mask & kBlockMM) blocks.mm = (q * q) * g;
  if (mask & kBlockME) blocks.me = (-w) * curl;
  if (mask & kBlockEM) blocks.em = w * curl;
  return blocks;
}

// --- planar ------------------------------------------------------------------

PolRefl fresnel_interface(const ResponsePair& inc, const ResponsePair& sub,
                          double k, double xi) {
  require_positive_xi(xi);
  const RealResp a = real_response(inc);
  const RealResp b = real_response(sub);
  const LayerSlice sa{a.eps, a.mu,
                      std::hypot(k, wavenumber_q(a, xi))};
  const LayerSlice sb{b.eps, b.mu,
                      std::hypot(k, wavenumber_q(b, xi))};
  return fresnel_slices(sa, sb);
}

PolRefl stack_reflection_down(const PlanarStack& stack, double k, double xi) {
  return reflection_down(stack, slice_layers(stack, k, xi),
                         stack.source_layer);
}

PolRefl stack_reflection_up(const PlanarStack& stack, double k, double xi) {
  return reflection_up(stack, slice_layers(stack, k, xi), stack.source_layer);
}

Mat3 halfspace_scattering_green(const PlanarStack& stack, double z,
                                double z_prime, double rho, double xi,
                                double rel_tol) {
  validate(stack);
  return assemble_planar(stack, z, z_prime, rho, 0.0, xi, rel_tol,
                         {{false, false, 1.0}})[0];
}

GreenBlocks scattering_blocks(const PlanarStack& stack, const Vec3& r,
                              const Vec3& r_prime, double xi, unsigned mask,
                              double rel_tol) {
  validate(stack);
  const double w = xi / kSpeedOfLight;
  std::vector<BlockRequest> requests;
  std::vector<int> which;
  if (mask & kBlockEE) {
    requests.push_back({false, false, w * w});
    which.push_back(0);
  }
  if (mask & kBlockMM) {
    requests.push_back({true, true, 1.0});
    which.push_back(1);
  }
  if (mask & kBlockEM) {
    requests.push_back({false, true, -w});
    which.push_back(2);
  }
  if (mask & kBlockME) {
    requests.push_back({true, false, -w});
    which.push_back(3);
  }
  std::vector<Mat3> mats =
      assemble_planar(stack, r.z, r_prime.z, r.x - r_prime.x, r.y - r_prime.y,
                      xi, rel_tol, requests);

  GreenBlocks blocks;
  blocks.part = GreenPart::scattering_only;
  blocks.r = r;
  blocks.r_prime = r_prime;
  blocks.xi = xi;
  for (size_t i = 0; i < which.size(); ++i) {
    const Mat3 m = mats[i] * requests[i].weight;
    switch (which[i]) {
      case 0: blocks.ee = m; break;
      case 1: blocks.mm = m; break;
      case 2: blocks.em = m; break;
      default: blocks.me = m; break;
    }
  }
  return blocks;
}

CoincidenceIntegrand planar_coincidence_integrand(const PlanarStack& stack,
                                                  double z, double xi,
                                                  double k) {
  const KSlice ks = make_kslice(stack, xi, k);
  const double kb2 = ks.kbar * ks.kbar;
  const double w2 = (xi / kSpeedOfLight) * (xi / kSpeedOfLight);

  CoincidenceIntegrand out;
  for (int pol = 0; pol < 2; ++pol) {
    const bool sigma_p = pol == 1;
    const double r_dn = sigma_p ? ks.r_dn.rp : ks.r_dn.rs;
    const double r_up = sigma_p ? ks.r_up.rp : ks.r_up.rs;
    ScatterTerm terms[4];
    const int n = scatter_terms(ks, r_dn, r_up, z, z, terms);
    for (int t = 0; t < n; ++t) {
      // traces and zz entries of the coincidence dyads
      const double dir = terms[t].sf * terms[t].ss;
      const double tr_ss = 1.0, zz_ss = 0.0;
      const double tr_pp = (dir * ks.kappa * ks.kappa - ks.k * ks.k) / kb2;
      const double zz_pp = -(ks.k * ks.k) / kb2;
      // electric block keeps the polarization; magnetic curls swap it
      double tr_e, zz_e, tr_m, zz_m;
      if (!sigma_p) {
        tr_e = w2 * tr_ss;
        zz_e = w2 * zz_ss;
        tr_m = kb2 * tr_pp;
        zz_m = kb2 * zz_pp;
      } else {
        tr_e = w2 * tr_pp;
        zz_e = w2 * zz_pp;
        tr_m = kb2 * tr_ss;
        zz_m = kb2 * zz_ss;
      }
      out.tr_ee += terms[t].w * tr_e;
      out.tr_mm += terms[t].w * tr_m;
      out.zz_minus_half_tr_ee += terms[t].w * (zz_e - 0.5 * tr_e);
      out.zz_minus_half_tr_mm += terms[t].w * (zz_m - 0.5 * tr_m);
    }
  }
  const double pref = ks.mu * ks.k / ks.kappa;
  out.tr_ee *= pref;
  out.tr_mm *= pref;
  out.zz_minus_half_tr_ee *= pref;
  out.zz_minus_half_tr_mm *= pref;
  return out;
}

// --- providers ---------------------------------------------------------------

GreenBlocks BulkBlocksProvider::blocks(const Vec3& r, const Vec3& r_prime,
                                       double xi, unsigned mask) const {
  return bulk_blocks(eval_material(medium_, xi), r, r_prime, xi, mask);
}

GreenBlocks StackBlocksProvider::blocks(const Vec3& r, const Vec3& r_prime,
                                        double xi, unsigned mask) const {
  GreenBlocks scat = scattering_blocks(stack_, r, r_prime, xi, mask, rel_tol_);
  if (!include_bulk_) return scat;
  const GreenBlocks bulk = bulk_blocks(
      eval_material(stack_.source_medium(), xi), r, r_prime, xi, mask);
  scat.ee += bulk.ee;
  scat.mm += bulk.mm;
  scat.em += bulk.em;
  scat.me += bulk.me;
  scat.part = GreenPart::full;
  return scat;
}

// --- duality transformation ----------------------------------------------------

GreenBlocks dual_transform_green(const GreenBlocks& blocks,
                                 const ResponsePair& resp_at_r,
                                 const ResponsePair& resp_at_r_prime) {
  if (blocks.part == GreenPart::full &&
      (blocks.r - blocks.r_prime).norm() < kCoincidenceGuard)
    throw std::invalid_argument(
        "full-tensor transform undefined at coincident points");
  const RealResp a = real_response(resp_at_r);
  const RealResp b = real_response(resp_at_r_prime);
  GreenBlocks out = blocks;
  out.ee = blocks.mm * (1.0 / (a.mu * b.mu));
  out.mm = blocks.ee * (a.eps * b.eps);
  out.em = blocks.me * (-b.eps / a.mu);
  out.me = blocks.em * (-a.eps / b.mu);
  return out;
}

// --- density grid and Born correction -------------------------------------------

double DensityGrid::cell_volume(int ix, int, int) const {
  if (layout == Layout::cartesian) return dx * dy * dz;
  const double rho_c = (ix + 0.5) * dx;
  return 2.0 * kPi * rho_c * dx * dz;
}

Vec3 DensityGrid::cell_center(int ix, int iy, int iz) const {
  if (layout == Layout::cartesian)
    return {origin.x + (ix + 0.5) * dx, origin.y + (iy + 0.5) * dy,
            origin.z + (iz + 0.5) * dz};
  return {origin.x + (ix + 0.5) * dx, origin.y, origin.z + (iz + 0.5) * dz};
}

DensityGrid make_box_grid(double eta, const Vec3& corner, double dx, double dy,
                          double dz, int nx, int ny, int nz) {
  DensityGrid g;
  g.layout = DensityGrid::Layout::cartesian;
  g.origin = corner;
  g.dx = dx;
  g.dy = dy;
  g.dz = dz;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.values.assign(static_cast<size_t>(nx) * ny * nz, eta);
  return g;
}

DensityGrid make_cylindrical_slab(double eta, double axis_x, double axis_y,
                                  double z_bottom, double z_top, double radius,
                                  int nr, int nz) {
  DensityGrid g;
  g.layout = DensityGrid::Layout::cylindrical;
  g.origin = {axis_x, axis_y, z_bottom};
  g.dx = radius / nr;
  g.dz = (z_top - z_bottom) / nz;
  g.nx = nr;
  g.ny = 1;
  g.nz = nz;
  g.values.assign(static_cast<size_t>(nr) * nz, eta);
  return g;
}

Mat3 born_delta_green(const DensityGrid& grid, const AtomModel& atom,
                      const GreenBlocksProvider& background, const Vec3& r,
                      const Vec3& r_prime, double xi, double rel_tol,
                      double* error_estimate) {
  require_positive_xi(xi);
  if (grid.values.size() !=
      static_cast<size_t>(grid.nx) * grid.ny * grid.nz)
    throw std::invalid_argument("grid value count does not match dimensions");
  if (grid.layout == DensityGrid::Layout::cylindrical) {
    if (grid.ny != 1)
      throw std::invalid_argument("cylindrical grids are single-ring stacks");
    for (const Vec3* p : {&r, &r_prime})
      if (std::hypot(p->x - grid.origin.x, p->y - grid.origin.y) >
          kCoincidenceGuard)
        throw std::invalid_argument(
            "cylindrical grids require on-axis evaluation points");
  }
  const AtomResponse ar = eval_atom(atom, xi);
  const Mat3 fine =
      born_sum(grid, ar.alpha, ar.beta, background, r, r_prime, xi);

  DensityGrid coarse;
  double err = 0.0;
  if (coarsen_grid(grid, coarse)) {
    const Mat3 coarse_val =
        born_sum(coarse, ar.alpha, ar.beta, background, r, r_prime, xi);
    err = (fine - coarse_val).frobenius();
    const double magnitude = std::max(fine.frobenius(), 1e-300);
    if (err > rel_tol * magnitude)
      throw QuadratureError("born grid unresolved",
                            {fine.frobenius(), err, 0});
  }
  if (error_estimate) *error_estimate = err;
  return fine;
}

// --- residual self-check ----------------------------------------------------------

double verify_green_residual(const ResponsePair& resp,
                             std::span<const std::pair<Vec3, Vec3>> pairs,
                             double xi) {
  require_positive_xi(xi);
  const RealResp rr = real_response(resp);
  const double w2eps =
      (xi / kSpeedOfLight) * (xi / kSpeedOfLight) * rr.eps;

  auto curl_over_mu = [&](const Vec3& r, const Vec3& rp) {
    const Vec3 sep = r - rp;
    const double R = sep.norm();
    const double q = wavenumber_q(rr, xi);
    const BulkRadial rad = bulk_radial(q, R);
    return Mat3::cross_matrix(sep * (rad.gp / R)); // (1/mu) curl G
  };

  double worst = 0.0;
  for (const auto& [r, rp] : pairs) {
    const double R = (r - rp).norm();
    const double h = 1e-6 * R;
    Mat3 d[3];
    for (int k = 0; k < 3; ++k) {
      Vec3 e;
      (k == 0 ? e.x : k == 1 ? e.y : e.z) = h;
      d[k] = (curl_over_mu(r + e, rp) - curl_over_mu(r - e, rp)) *
             (1.0 / (2.0 * h));
    }
    Mat3 curl_curl;
    for (int j = 0; j < 3; ++j) {
      curl_curl(0, j) = d[1](2, j) - d[2](1, j);
      curl_curl(1, j) = d[2](0, j) - d[0](2, j);
      curl_curl(2, j) = d[0](1, j) - d[1](0, j);
    }
    const Mat3 g = bulk_green(resp, r - rp, xi);
    const Mat3 residual = curl_curl + w2eps * g;
    worst = std::max(worst, residual.max_abs() / (w2eps * g.max_abs()));
  }
  return worst;
}

} // namespace dualcas
