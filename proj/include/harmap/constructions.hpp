#pragma once

#include "harmap/energy.hpp"
#include "harmap/fields.hpp"
#include "harmap/geometry.hpp"

#include <string>
#include <vector>

namespace harmap {

// ---------------------------------------------------------------------------
// Layered blow-up sequence on the box (0,l)^2 x (-d,d)

struct BlowupParams {
  double rho0 = 0.0;  // radians
  double eps = 0.1;   // layer parameter, eps^2 < d
  double d = 1.0;
  double l = 1.0;
  EnergyParams energy;

  void validate() const;
};

/// rho0 + eps in the core; quadratic boundary layers of width eps^2 bring the
/// angle back to rho0 at z = +-d. Throws when z is outside [-d, d].
double rho_eps(double z, const BlowupParams& p);

/// n = (cos rho(z), 0, sin rho(z)). Requires the box's vertical spacing to
/// resolve the layer: h <= eps^2 / 4.
SphereField oldano_barbero_field(const BlowupParams& p, const BoxDomain& box);

/// 4 l^2 (K/3 - K13 sin(2 rho0) / (2 eps)).
double closed_form_blowup_energy(const BlowupParams& p);

struct BlowupResult {
  double closed_form = 0.0;
  EnergyReport numeric;
  double relative_error = 0.0;
  double h = 0.0;
  std::size_t nodes = 0;
};

/// Evaluates the full energy of the layered field on a box with h = eps^2/4.
BlowupResult blowup_energy(const BlowupParams& p, int lateral_cells = 4);

// ---------------------------------------------------------------------------
// Planar vortices

/// (-x2, x1)/|x| for orientation +1, (x2, -x1)/|x| for -1. Throws at 0.
Vec2 vortex_field(const Vec2& x, int orientation);

/// Cell-midpoint quadrature of |x|^-p over the unit disk with the cell that
/// contains the origin removed. Accepts 1 <= p <= 2.
double w1p_vortex_norm(double p, double h);

struct VortexNormEstimate {
  double coarse = 0.0;         // spacing h
  double fine = 0.0;           // spacing h/2
  double extrapolated = 0.0;   // Richardson with order 2 - p (p < 2 only)
};

/// For p = 2 no extrapolation is done and `extrapolated` repeats `fine`.
VortexNormEstimate w1p_vortex_richardson(double p, double h);

/// Winding number of a nonvanishing planar field sampled along a closed
/// curve (first sample not repeated). Throws if two consecutive samples turn
/// by pi or more, or if a sample vanishes.
int vortex_index(const std::vector<Vec2>& samples);

// ---------------------------------------------------------------------------
// Tangent boundary data on closed surfaces of genus 0, 1, 2

struct BoundaryNode {
  Vec3 position;
  Vec3 normal;
  Vec3 value;  // unit tangent vector
};

/// Chart type of a vortex: "phi" (counter-clockwise rotation about nu),
/// "phi_tilde" (clockwise), or "saddle".
/// `index` is the ledger entry, from the sign of the Gaussian curvature at the
/// zero; `winding` is measured on a small loop around it.
struct VortexRecord {
  Vec3 center;
  Vec3 normal;
  int index = 0;
  int winding = 0;
  std::string chart;
};

struct TangentBoundaryData {
  int genus = 0;
  std::string surface;
  int euler_characteristic = 0;
  std::vector<BoundaryNode> nodes;
  std::vector<VortexRecord> vortices;
  int ledger_sum = 0;
  double max_tangency = 0.0;  // max |g . nu| over nodes
};

/// Sphere (k=0), torus (k=1) or the genus-2 tube around a lemniscate (k=2),
/// with a unit tangent field whose zeros are recorded in the index ledger.
/// `resolution` controls the number of surface nodes.
TangentBoundaryData genus_boundary_field(int genus, int resolution = 48);

// ---------------------------------------------------------------------------
// Rotation taking the graph normal to the north pole

struct RotationSample {
  Mat3 Q = Mat3::Identity();
  double cos_tau = 1.0;
  double sin_tau = 0.0;
};

/// Rotation about nu x e3 by the angle between nu and e3, as a function of the
/// graph gradient. Identity when |grad phi| < 1e-10.
RotationSample rotation_from_gradient(const Vec2& grad);
RotationSample rotation_field(const SurfaceFrame& frame);

/// One rotation per lateral column of the domain.
std::vector<RotationSample> rotation_field(const GraphDomain& domain);

// ---------------------------------------------------------------------------
// Projection onto the line y + span(y x nu)

struct ProjectionQuery {
  Vec3 x = Vec3::Zero();
  Vec3 y = Vec3::UnitX();
  Vec3 z = Vec3::Zero();
  Vec3 nu = Vec3::UnitZ();
};

/// Orthogonal projector onto span(y x nu). Throws if |y x nu| <= 1e-8.
Mat3 line_projector(const Vec3& y, const Vec3& nu);

/// [(y x nu)(y x nu)^T] z / |y x nu|^2 + y.
Vec3 tangent_line_projection(const ProjectionQuery& q);

/// Column j is d Pi / d z^j (the projector itself).
Mat3 projection_dz(const ProjectionQuery& q);

/// Column j is d Pi / d y^j.
Mat3 projection_dy(const ProjectionQuery& q);

/// Column j is d Pi / d x^j given dnu.col(j) = d nu / d x^j.
Mat3 projection_dx(const ProjectionQuery& q, const Mat3& dnu);

}  // namespace harmap
