#pragma once

#include "harmap/fields.hpp"
#include "harmap/geometry.hpp"
#include "harmap/mesh.hpp"

#include <vector>

namespace harmap {

/// Prefactor of the volume term: K/2 in the full energy with the
/// ((n.grad)n).nu surface term, K in the reduced energy used under tangential
/// boundary conditions.
enum class DirichletScale { HalfK, FullK };

struct EnergyReport {
  double dirichlet = 0.0;
  double surface = 0.0;
  double total = 0.0;
  /// Per-node energy density (already multiplied by quadrature weights) so
  /// that summing it gives `total`.
  std::vector<double> density;
};

/// Per-node share of int |grad u|^2 (prefactor 1): half of every incident
/// forward-difference edge term.
std::vector<double> dirichlet_density(const SphereField& u, const Mesh& mesh);

double dirichlet_energy(const SphereField& u, const Mesh& mesh, double K,
                        DirichletScale scale);

/// K13 * int ((u.grad)u).nu over the mesh's surface points: all faces of a
/// box, G_phi of a graph domain.
double surface_term_E(const SphereField& u, const Mesh& mesh, double K13);

/// -K13 * int_{G_phi} u^alpha u^beta d nu^beta / d x^alpha.
double surface_term_G(const SphereField& u, const Mesh& mesh, double K13);

/// Full energy: (K/2) int |grad u|^2 + surface_term_E.
EnergyReport energy_E(const SphereField& u, const Mesh& mesh, const EnergyParams& params);

/// Reduced energy: K int |grad u|^2 + surface_term_G.
EnergyReport energy_G(const SphereField& u, const Mesh& mesh, const EnergyParams& params);

/// Total of energy_G without the density buffer.
double energy_G_value(const SphereField& u, const Mesh& mesh, const EnergyParams& params);

/// Exact Euclidean gradient of energy_G_value with respect to nodal values.
std::vector<Vec3> grad_G_euclidean(const SphereField& u, const Mesh& mesh,
                                   const EnergyParams& params);

/// Projects a nodal vector onto the tangent plane of S^2 at u, and at G_phi
/// nodes additionally onto the boundary tangent plane.
Vec3 project_admissible(const Vec3& g, const Vec3& u, const Mesh& mesh, NodeIndex v);

/// Riemannian gradient: grad_G_euclidean followed by project_admissible.
std::vector<Vec3> grad_G(const SphereField& u, const Mesh& mesh, const EnergyParams& params);

/// r^-1 * int_{Omega cap C(a, r)} |grad u|^2. Requires r >= 2h.
double rescaled_energy(const SphereField& u, const Mesh& mesh, const Vec3& a, double r);

/// Same, reusing a precomputed dirichlet_density.
double rescaled_energy(const std::vector<double>& density, const Mesh& mesh, const Vec3& a,
                       double r);

struct DecayProfile {
  Vec3 center = Vec3::Zero();
  std::vector<double> radii;      // strictly decreasing
  std::vector<double> integrals;  // int_{C(a,r)} |grad u|^2
  std::vector<double> values;     // E_r = integrals / r
  double exponent = 0.0;          // slope of log integral vs log r
  double residual = 0.0;          // RMS residual of the log-log fit
  std::size_t used = 0;           // radii surviving the positivity filter
  /// E_R at the largest radius relative to the total Dirichlet energy; the
  /// smallness hypothesis of the decay estimate is checked against this.
  double smallness = 0.0;
};

/// Least-squares slope of log(integral) against log(r). Nonpositive values
/// are dropped; fewer than 4 survivors is an error.
DecayProfile decay_fit(const std::vector<double>& radii, const std::vector<double>& integrals);

}  // namespace harmap
