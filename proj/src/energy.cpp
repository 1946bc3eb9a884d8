#include "harmap/energy.hpp"

#include "harmap/parallel.hpp"

#include <cmath>

namespace harmap {

std::vector<double> dirichlet_density(const SphereField& u, const Mesh& mesh) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  std::vector<double> dens(mesh.size());
  parallel::for_each_index(mesh.size(), [&](std::size_t v) {
    double s = 0.0;
    for (const auto& slot : mesh.neighbors[v]) {
      if (slot.node == kNoNode || slot.weight == 0.0) continue;
      s += slot.weight * (u.values[v] - u.values[slot.node]).squaredNorm();
    }
    dens[v] = 0.5 * s;
  });
  return dens;
}

double dirichlet_energy(const SphereField& u, const Mesh& mesh, double K, DirichletScale scale) {
  const auto dens = dirichlet_density(u, mesh);
  const double raw = parallel::sum(dens.size(), [&](std::size_t v) { return dens[v]; });
  return (scale == DirichletScale::HalfK ? 0.5 * K : K) * raw;
}

namespace {

Vec3 apply(const Stencil& st, const SphereField& u) {
  Vec3 acc = Vec3::Zero();
  for (const auto& [node, coeff] : st) acc += coeff * u.values[node];
  return acc;
}

/// ((u.grad)u).nu at a surface point.
double convective_normal(const SurfacePoint& sp, const SphereField& u) {
  const Vec3& un = u.values[sp.node];
  Vec3 conv = Vec3::Zero();
  for (int k = 0; k < 3; ++k) conv += un[k] * apply(sp.derivative[k], u);
  return conv.dot(sp.normal);
}

double curvature_quadratic(const SurfacePoint& sp, const Vec3& un) {
  return un.dot(sp.shape * un);
}

}  // namespace

double surface_term_E(const SphereField& u, const Mesh& mesh, double K13) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  return K13 * parallel::sum(mesh.surface.size(), [&](std::size_t s) {
           const auto& sp = mesh.surface[s];
           return sp.area * convective_normal(sp, u);
         });
}

double surface_term_G(const SphereField& u, const Mesh& mesh, double K13) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  return -K13 * parallel::sum(mesh.surface.size(), [&](std::size_t s) {
           const auto& sp = mesh.surface[s];
           if (mesh.tags[sp.node] != NodeTag::Graph) return 0.0;
           return sp.area * curvature_quadratic(sp, u.values[sp.node]);
         });
}

EnergyReport energy_E(const SphereField& u, const Mesh& mesh, const EnergyParams& params) {
  params.validate();
  EnergyReport r;
  r.density = dirichlet_density(u, mesh);
  for (double& d : r.density) d *= 0.5 * params.K;
  r.dirichlet = parallel::sum(r.density.size(), [&](std::size_t v) { return r.density[v]; });
  std::vector<double> surf(mesh.size(), 0.0);
  for (const auto& sp : mesh.surface)
    surf[sp.node] += params.K13 * sp.area * convective_normal(sp, u);
  r.surface = parallel::sum(surf.size(), [&](std::size_t v) { return surf[v]; });
  for (std::size_t v = 0; v < surf.size(); ++v) r.density[v] += surf[v];
  r.total = r.dirichlet + r.surface;
  return r;
}

EnergyReport energy_G(const SphereField& u, const Mesh& mesh, const EnergyParams& params) {
  params.validate();
  EnergyReport r;
  r.density = dirichlet_density(u, mesh);
  for (double& d : r.density) d *= params.K;
  r.dirichlet = parallel::sum(r.density.size(), [&](std::size_t v) { return r.density[v]; });
  std::vector<double> surf(mesh.size(), 0.0);
  for (const auto& sp : mesh.surface) {
    if (mesh.tags[sp.node] != NodeTag::Graph) continue;
    surf[sp.node] -= params.K13 * sp.area * curvature_quadratic(sp, u.values[sp.node]);
  }
  r.surface = parallel::sum(surf.size(), [&](std::size_t v) { return surf[v]; });
  for (std::size_t v = 0; v < surf.size(); ++v) r.density[v] += surf[v];
  r.total = r.dirichlet + r.surface;
  return r;
}

double energy_G_value(const SphereField& u, const Mesh& mesh, const EnergyParams& params) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  const double K = params.K, K13 = params.K13;
  return parallel::sum(mesh.size(), [&](std::size_t v) {
    double s = 0.0;
    for (const auto& slot : mesh.neighbors[v]) {
      if (slot.node == kNoNode || slot.weight == 0.0) continue;
      s += slot.weight * (u.values[v] - u.values[slot.node]).squaredNorm();
    }
    double e = 0.5 * K * s;
    const NodeIndex si = mesh.graph_surface_index[v];
    if (si != kNoNode) {
      const auto& sp = mesh.surface[si];
      e -= K13 * sp.area * curvature_quadratic(sp, u.values[v]);
    }
    return e;
  });
}

std::vector<Vec3> grad_G_euclidean(const SphereField& u, const Mesh& mesh,
                                   const EnergyParams& params) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  std::vector<Vec3> g(mesh.size());
  const double K = params.K, K13 = params.K13;
  parallel::for_each_index(mesh.size(), [&](std::size_t v) {
    Vec3 acc = Vec3::Zero();
    for (const auto& slot : mesh.neighbors[v]) {
      if (slot.node == kNoNode || slot.weight == 0.0) continue;
      acc += 2.0 * slot.weight * (u.values[v] - u.values[slot.node]);
    }
    acc *= K;
    const NodeIndex si = mesh.graph_surface_index[v];
    if (si != kNoNode) {
      const auto& sp = mesh.surface[si];
      acc -= K13 * sp.area * (sp.shape + sp.shape.transpose()) * u.values[v];
    }
    g[v] = acc;
  });
  return g;
}

Vec3 project_admissible(const Vec3& g, const Vec3& u, const Mesh& mesh, NodeIndex v) {
  Vec3 p = g - u.dot(g) * u;
  const NodeIndex si = mesh.graph_surface_index[v];
  if (si != kNoNode) {
    const Vec3& nu = mesh.surface[si].normal;
    p -= nu.dot(p) * nu;
  }
  return p;
}

std::vector<Vec3> grad_G(const SphereField& u, const Mesh& mesh, const EnergyParams& params) {
  auto g = grad_G_euclidean(u, mesh, params);
  parallel::for_each_index(mesh.size(), [&](std::size_t v) {
    g[v] = project_admissible(g[v], u.values[v], mesh, v);
  });
  return g;
}

double rescaled_energy(const std::vector<double>& density, const Mesh& mesh, const Vec3& a,
                       double r) {
  const auto clip = cylinder_clip(mesh, Cylinder{a, r});
  const auto nodes = clip.all();
  double s = 0.0;
  for (NodeIndex v : nodes) s += density[v];
  return s / r;
}

double rescaled_energy(const SphereField& u, const Mesh& mesh, const Vec3& a, double r) {
  return rescaled_energy(dirichlet_density(u, mesh), mesh, a, r);
}

DecayProfile decay_fit(const std::vector<double>& radii, const std::vector<double>& integrals) {
  require(radii.size() == integrals.size(), "decay_fit: radii and values differ in length");
  require(radii.size() >= 4, "decay_fit needs at least 4 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    require(radii[i] < radii[i - 1], "decay_fit: radii must be strictly decreasing");

  DecayProfile p;
  p.radii = radii;
  p.integrals = integrals;
  p.values.resize(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) p.values[i] = integrals[i] / radii[i];

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] > 0.0 && integrals[i] > 0.0) {
      xs.push_back(std::log(radii[i]));
      ys.push_back(std::log(integrals[i]));
    }
  }
  p.used = xs.size();
  if (p.used < 4) throw NumericalError("decay_fit: fewer than 4 positive samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  p.exponent = sxy / sxx;
  const double icpt = my - p.exponent * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (icpt + p.exponent * xs[i]);
    ss += e * e;
  }
  p.residual = std::sqrt(ss / n);
  return p;
}

}  // namespace harmap
