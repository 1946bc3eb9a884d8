#include "harmap/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace harmap {

void BlowupParams::validate() const {
  energy.validate();
  require(d > 0.0 && l > 0.0, "box dimensions must be positive");
  require(eps > 0.0 && eps < std::min(1.0, std::sqrt(d)), "eps must lie in (0, min(1, sqrt(d)))");
  require(std::isfinite(rho0), "rho0 must be finite");
}

double rho_eps(double z, const BlowupParams& p) {
  require(z >= -p.d && z <= p.d, "rho_eps: z outside [-d, d]");
  const double e2 = p.eps * p.eps;
  const double core = p.rho0 + p.eps;
  const double inv3 = 1.0 / (e2 * p.eps);
  if (z >= p.d - e2) {
    const double s = z - p.d + e2;
    return core - inv3 * s * s;
  }
  if (z <= -p.d + e2) {
    const double s = z + p.d - e2;
    return core - inv3 * s * s;
  }
  return core;
}

SphereField oldano_barbero_field(const BlowupParams& p, const BoxDomain& box) {
  p.validate();
  require(std::abs(box.d() - p.d) <= 1e-12 * p.d && std::abs(box.l() - p.l) <= 1e-12 * p.l,
          "box does not match the blow-up parameters");
  require(box.h() <= 0.25 * p.eps * p.eps * (1.0 + 1e-9),
          "grid does not resolve the boundary layer (need h <= eps^2/4)");
  const Mesh& m = box.mesh();
  SphereField u;
  u.values.resize(m.size());
  for (NodeIndex v = 0; v < m.size(); ++v) {
    const double z = std::clamp(m.points[v].z(), -p.d, p.d);
    const double r = rho_eps(z, p);
    u.values[v] = Vec3(std::cos(r), 0.0, std::sin(r));
  }
  u.normalized = true;
  return u;
}

double closed_form_blowup_energy(const BlowupParams& p) {
  p.validate();
  return 4.0 * p.l * p.l *
         (p.energy.K / 3.0 - p.energy.K13 * std::sin(2.0 * p.rho0) / (2.0 * p.eps));
}

BlowupResult blowup_energy(const BlowupParams& p, int lateral_cells) {
  p.validate();
  const double target = 0.25 * p.eps * p.eps;
  const double cells = std::ceil(2.0 * p.d / target - 1e-9);
  const double h = 2.0 * p.d / cells;
  const BoxDomain box = build_box_domain(p.l, p.d, h, lateral_cells);
  const SphereField u = oldano_barbero_field(p, box);
  BlowupResult r;
  r.closed_form = closed_form_blowup_energy(p);
  r.numeric = energy_E(u, box.mesh(), p.energy);
  r.relative_error = std::abs(r.numeric.total - r.closed_form) / std::abs(r.closed_form);
  r.h = h;
  r.nodes = box.mesh().size();
  return r;
}

}  // namespace harmap
