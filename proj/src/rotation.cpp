#include "harmap/constructions.hpp"

#include <cmath>

namespace harmap {

RotationSample rotation_from_gradient(const Vec2& grad) {
  RotationSample r;
  const double g2 = grad.squaredNorm();
  if (std::sqrt(g2) < 1e-10) return r;
  const double s = std::sqrt(1.0 + g2);
  const double p1 = grad.x(), p2 = grad.y();
  const double k = 1.0 / (s * (s + 1.0));
  r.Q << 1.0 - p1 * p1 * k, -p1 * p2 * k, p1 / s,
         -p1 * p2 * k, 1.0 - p2 * p2 * k, p2 / s,
         -p1 / s, -p2 / s, 1.0 / s;
  r.cos_tau = 1.0 / s;
  r.sin_tau = std::sqrt(g2) / s;
  return r;
}

RotationSample rotation_field(const SurfaceFrame& frame) {
  const Vec3& nu = frame.normal;
  require(nu.z() > 0.0, "rotation_field: normal must point upward");
  return rotation_from_gradient(Vec2(-nu.x() / nu.z(), -nu.y() / nu.z()));
}

std::vector<RotationSample> rotation_field(const GraphDomain& domain) {
  const Mesh& m = domain.mesh();
  std::vector<RotationSample> out(m.column_count());
  for (std::size_t c = 0; c < m.column_count(); ++c) out[c] = rotation_field(domain.frame_of_column(c));
  return out;
}

}  // namespace harmap
