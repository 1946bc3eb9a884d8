#include "harmap/fields.hpp"

#include "harmap/parallel.hpp"

#include <cmath>
#include <string>

namespace harmap {

void EnergyParams::validate() const {
  require(K > 0.0, "elastic constant K must be positive");
  require(std::isfinite(K13), "K13 must be finite");
}

SphereField make_field(const PointMap& f, const Mesh& mesh) {
  SphereField u;
  u.values.resize(mesh.size());
  for (NodeIndex v = 0; v < mesh.size(); ++v) {
    const Vec3 val = f(mesh.points[v]);
    const double n = val.norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw ValidationError("field vanishes at node " + std::to_string(v));
    u.values[v] = val / n;
  }
  u.normalized = true;
  return u;
}

SphereField renormalize(const SphereField& u) {
  SphereField out;
  out.values.resize(u.size());
  for (NodeIndex v = 0; v < u.size(); ++v) {
    const double n = u.values[v].norm();
    if (!(n > 0.0)) throw ValidationError("cannot renormalize zero vector at node " + std::to_string(v));
    out.values[v] = u.values[v] / n;
  }
  out.normalized = true;
  return out;
}

Vec3 boundary_mean(const SphereField& u, const Mesh& mesh) {
  Vec3 acc = Vec3::Zero();
  double area = 0.0;
  for (const auto& sp : mesh.surface) {
    if (mesh.tags[sp.node] != NodeTag::Graph) continue;
    acc += sp.area * u.values[sp.node];
    area += sp.area;
  }
  require(area > 0.0, "boundary mean needs at least one G_phi node");
  return acc / area;
}

TangencyReport tangency_violation(const SphereField& u, const Mesh& mesh) {
  TangencyReport r;
  for (const auto& sp : mesh.surface) {
    if (mesh.tags[sp.node] != NodeTag::Graph) continue;
    const double viol = std::abs(u.values[sp.node].dot(sp.normal));
    if (r.argmax == kNoNode || viol > r.max_violation) r = {viol, sp.node};
  }
  return r;
}

double unit_violation(const SphereField& u) {
  if (u.size() == 0) return 0.0;
  return parallel::max(u.size(), [&](std::size_t v) {
           return std::abs(u.values[v].norm() - 1.0);
         }).value;
}

}  // namespace harmap
