#pragma once

#include "harmap/mesh.hpp"
#include "harmap/types.hpp"

#include <functional>
#include <vector>

namespace harmap {

/// One 3-vector per mesh node. `normalized` tracks whether the unit-length
/// invariant is known to hold.
struct SphereField {
  std::vector<Vec3> values;
  bool normalized = false;

  std::size_t size() const { return values.size(); }
  const Vec3& operator[](NodeIndex v) const { return values[v]; }
  Vec3& operator[](NodeIndex v) { return values[v]; }
};

/// Elastic constants: K > 0, K13 of any sign.
struct EnergyParams {
  double K = 1.0;
  double K13 = 0.0;

  void validate() const;
};

using PointMap = std::function<Vec3(const Vec3&)>;

/// Samples f at every node and normalizes. Throws naming the first node where
/// f vanishes.
SphereField make_field(const PointMap& f, const Mesh& mesh);

/// Returns a unit copy; throws on a zero vector.
SphereField renormalize(const SphereField& u);

/// Area-weighted mean of u over G_phi. Throws when G_phi is empty.
Vec3 boundary_mean(const SphereField& u, const Mesh& mesh);

struct TangencyReport {
  double max_violation = 0.0;
  NodeIndex argmax = kNoNode;
};

/// max over G_phi of |u . nu|.
TangencyReport tangency_violation(const SphereField& u, const Mesh& mesh);

/// Largest deviation | |u| - 1 | over all nodes.
double unit_violation(const SphereField& u);

}  // namespace harmap
