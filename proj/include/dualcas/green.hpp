// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dualcas/linalg.hpp"
#include "dualcas/quadrature.hpp"
#include "dualcas/response_models.hpp"

namespace dualcas {

// ---------------------------------------------------------------------------
// Conventions
//
// All evaluation happens on the positive imaginary frequency axis, where
// every tensor below is real. The dyadic Green tensor G solves
//     curl (1/mu) curl G  + (xi/c)^2 eps G = delta
// and the four frequency-weighted blocks are, with the (i w/c) = -xi/c
// weights of the imaginary axis,
//     G_ee = (xi^2/c^2) G          G_em = -(xi/c) (G x grad')
//     G_me = -(xi/c) (curl G)      G_mm = curl G x grad'
// Planar geometry: stacks are listed source side first; heights z are
// measured upward from the lower boundary of the layer containing the
// points. Lateral coordinates are the x,y components of the positions.
// ---------------------------------------------------------------------------

enum class GreenPart { full, scattering_only };

struct GreenBlocks {
  Mat3 ee, mm, em, me;
  GreenPart part = GreenPart::full;
  Vec3 r, r_prime;
  double xi = 0.0;
};

enum BlockMask : unsigned {
  kBlockEE = 1u,
  kBlockMM = 2u,
  kBlockEM = 4u,
  kBlockME = 8u,
  kBlockAll = 15u,
};

struct PlanarLayer {
  MaterialModel material;
  double thickness = 0.0; // m; ignored when semi_infinite
  bool semi_infinite = false;
};

// Planar multilayer. layers.front() and layers.back() are the two
// semi-infinite outer media; interior layers have positive thickness.
// source_layer selects the layer containing the evaluation points
// (any layer except the bottom one).
struct PlanarStack {
  std::vector<PlanarLayer> layers;
  int source_layer = 0;

  const MaterialModel& source_medium() const {
    return layers[source_layer].material;
  }
  // Optional host medium on the atom side; empty means vacuum. Realized as
  // the material of the source-side outer layer.
  std::optional<MaterialModel> atom_side_host() const;
};

void validate(const PlanarStack& stack);

PlanarStack make_halfspace(MaterialModel body,
                           MaterialModel host = MaterialModel{});
// Interior slabs listed top to bottom as (material, thickness).
PlanarStack make_layered(MaterialModel host,
                         std::vector<std::pair<MaterialModel, double>> slabs,
                         MaterialModel bottom);
// Two half-spaces facing each other across a gap; points live in the gap.
PlanarStack make_cavity(MaterialModel top_body, MaterialModel gap_medium,
                        double gap, MaterialModel bottom_body);

// Swaps the electric and magnetic oscillator lists of every layer, which
// realizes eps* = mu, mu* = eps exactly at all frequencies.
PlanarStack dual_stack(const PlanarStack& stack);
MaterialModel dual_material(const MaterialModel& m);

// --- homogeneous medium -----------------------------------------------------

// Green tensor of a homogeneous medium at imaginary frequency xi:
// mu times the free-space form with decay constant q = sqrt(eps mu) xi / c.
// separation must exceed the coincidence guard.
Mat3 bulk_green(const ResponsePair& resp, const Vec3& separation, double xi);

GreenBlocks bulk_blocks(const ResponsePair& resp, const Vec3& r,
                        const Vec3& r_prime, double xi,
                        unsigned mask = kBlockAll);

// --- planar machinery -------------------------------------------------------

struct PolRefl {
  double rs = 0.0;
  double rp = 0.0;
};

// Single-interface reflection coefficients on the imaginary axis, incidence
// from medium 1; k is the transverse wavevector.
PolRefl fresnel_interface(const ResponsePair& inc, const ResponsePair& sub,
                          double k, double xi);

// Reflection coefficients of everything below/above the source layer,
// via the standard multilayer recursion.
PolRefl stack_reflection_down(const PlanarStack& stack, double k, double xi);
PolRefl stack_reflection_up(const PlanarStack& stack, double k, double xi);

// Scattering part of the Green tensor for both points in the source layer,
// assembled from the angular-spectrum representation; curls are applied as
// polarization-vector factors in k space.
Mat3 halfspace_scattering_green(const PlanarStack& stack, double z,
                                double z_prime, double rho, double xi,
                                double rel_tol = kDefaultInnerRelTol);

GreenBlocks scattering_blocks(const PlanarStack& stack, const Vec3& r,
                              const Vec3& r_prime, double xi,
                              unsigned mask = kBlockAll,
                              double rel_tol = kDefaultInnerRelTol);

// Per-(xi,k) integrand pieces at coincidence (z = z', rho = 0), with the
// radial measure (k/kappa) and the source-medium prefactor folded in:
//   Tr G^(1)_ll(z,z)        = (1/4pi) Int dk tr_ll
//   [zz - Tr/2] G^(1)_ll    = (1/4pi) Int dk zz_minus_half_tr_ll
struct CoincidenceIntegrand {
  double tr_ee = 0.0;
  double tr_mm = 0.0;
  double zz_minus_half_tr_ee = 0.0;
  double zz_minus_half_tr_mm = 0.0;
};
CoincidenceIntegrand planar_coincidence_integrand(const PlanarStack& stack,
                                                  double z, double xi,
                                                  double k);

// --- block providers ---------------------------------------------------------

class GreenBlocksProvider {
 public:
  virtual ~GreenBlocksProvider() = default;
  virtual GreenBlocks blocks(const Vec3& r, const Vec3& r_prime, double xi,
                             unsigned mask) const = 0;
};

class BulkBlocksProvider final : public GreenBlocksProvider {
 public:
  explicit BulkBlocksProvider(MaterialModel medium)
      : medium_(std::move(medium)) {}
  GreenBlocks blocks(const Vec3& r, const Vec3& r_prime, double xi,
                     unsigned mask) const override;

 private:
  MaterialModel medium_;
};

// Bulk part of the source medium plus the scattering part of the stack.
class StackBlocksProvider final : public GreenBlocksProvider {
 public:
  StackBlocksProvider(PlanarStack stack, bool include_bulk = true,
                      double rel_tol = kDefaultInnerRelTol)
      : stack_(std::move(stack)), include_bulk_(include_bulk),
        rel_tol_(rel_tol) {
    validate(stack_);
  }
  GreenBlocks blocks(const Vec3& r, const Vec3& r_prime, double xi,
                     unsigned mask) const override;

 private:
  PlanarStack stack_;
  bool include_bulk_;
  double rel_tol_;
};

// --- duality transformation ---------------------------------------------------

// Transformation law of the blocks under eps <-> mu, with the response
// values of the media at the two points. Coincident full-tensor input is
// rejected; coincidence-limit scattering parts are fine (their contact
// terms vanish identically).
GreenBlocks dual_transform_green(const GreenBlocks& blocks,
                                 const ResponsePair& resp_at_r,
                                 const ResponsePair& resp_at_r_prime);

// --- linear (Born) correction --------------------------------------------------

// Density field sampled on a grid of cells. The cylindrical layout is a
// stack of coaxial rings (axisymmetric density); it is valid only when both
// Green evaluation points lie on the grid axis, and yields the exact
// azimuthal integral of the ring contributions.
struct DensityGrid {
  enum class Layout { cartesian, cylindrical };
  Layout layout = Layout::cartesian;
  Vec3 origin;                 // cartesian: min corner; cylindrical: axis base
  double dx = 0.0, dy = 0.0, dz = 0.0; // cylindrical: dx = radial step
  int nx = 1, ny = 1, nz = 1;          // cylindrical: ny must be 1
  std::vector<double> values;          // index (iz*ny + iy)*nx + ix

  double cell_volume(int ix, int iy, int iz) const;
  Vec3 cell_center(int ix, int iy, int iz) const;
};

DensityGrid make_box_grid(double eta, const Vec3& corner, double dx, double dy,
                          double dz, int nx, int ny, int nz);
DensityGrid make_cylindrical_slab(double eta, double axis_x, double axis_y,
                                  double z_bottom, double z_top, double radius,
                                  int nr, int nz);

// First-order change of the Green tensor caused by a dilute atomic cloud,
// integrated over the grid cells with midpoint weights. The error estimate
// compares against a 2x coarsened grid; when it exceeds rel_tol the grid is
// reported as unresolved.
Mat3 born_delta_green(const DensityGrid& grid, const AtomModel& atom,
                      const GreenBlocksProvider& background, const Vec3& r,
                      const Vec3& r_prime, double xi, double rel_tol = 1e-3,
                      double* error_estimate = nullptr);

// --- self-check -----------------------------------------------------------------

// Applies the defining differential operator to the homogeneous-medium
// Green tensor, with the inner curl analytic and the outer curl taken by
// central differences (step 1e-6 |dr|); returns the largest residual
// relative to the (xi/c)^2 eps G term over the supplied point pairs.
double verify_green_residual(const ResponsePair& resp,
                             std::span<const std::pair<Vec3, Vec3>> pairs,
                             double xi);

} // namespace dualcas
