#include "harmap/optimizer.hpp"

#include "harmap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace harmap {

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::Tangential ? "tangential" : "fixed";
}

BoundaryMode boundary_mode_from_string(const std::string& name) {
  if (name == "tangential") return BoundaryMode::Tangential;
  if (name == "fixed") return BoundaryMode::FixedTrace;
  throw ValidationError("unknown boundary mode '" + name + "' (expected tangential or fixed)");
}

void MinimizeOptions::validate() const {
  require(max_iters >= 0, "max_iters must be nonnegative");
  require(step0 > 0.0, "step0 must be positive");
  require(armijo_c > 0.0 && armijo_c < 1.0, "armijo c must lie in (0, 1)");
  require(backtrack > 0.0 && backtrack < 1.0, "backtracking factor must lie in (0, 1)");
  require(grad_tol > 0.0 && energy_tol > 0.0, "tolerances must be positive");
  require(max_backtracks >= 1, "max_backtracks must be at least 1");
}

SphereField extend_trace(const Mesh& mesh, const PointMap& trace, BoundaryMode mode) {
  SphereField u;
  u.values.resize(mesh.size());
  for (std::size_t c = 0; c < mesh.column_count(); ++c) {
    const std::size_t lo = mesh.column_start[c], hi = mesh.column_start[c + 1];
    const Vec3 top = trace(mesh.points[hi - 1]);
    for (std::size_t v = lo; v < hi; ++v)
      u.values[v] = mesh.tags[v] == NodeTag::Fixed ? trace(mesh.points[v]) : top;
  }
  if (mode == BoundaryMode::Tangential) {
    for (NodeIndex v = 0; v < mesh.size(); ++v) {
      const NodeIndex si = mesh.graph_surface_index[v];
      if (si == kNoNode) continue;
      const Vec3& nu = mesh.surface[si].normal;
      u.values[v] -= u.values[v].dot(nu) * nu;
    }
  }
  return renormalize(u);
}

namespace {

struct Descent {
  const Mesh& mesh;
  const EnergyParams& params;
  std::vector<char> free;

  std::vector<Vec3> gradient(const SphereField& u) const {
    auto g = grad_G(u, mesh, params);
    for (NodeIndex v = 0; v < g.size(); ++v)
      if (!free[v]) g[v].setZero();
    return g;
  }

  double metric_norm2(const std::vector<Vec3>& g) const {
    return parallel::sum(g.size(), [&](std::size_t v) { return g[v].squaredNorm() / mesh.volume[v]; });
  }

  SphereField step(const SphereField& u, const std::vector<Vec3>& g, double t) const {
    SphereField out;
    out.values = u.values;
    parallel::for_each_index(u.size(), [&](std::size_t v) {
      if (!free[v]) return;
      Vec3 w = u.values[v] - (t / mesh.volume[v]) * g[v];
      const NodeIndex si = mesh.graph_surface_index[v];
      if (si != kNoNode) {
        const Vec3& nu = mesh.surface[si].normal;
        w -= w.dot(nu) * nu;
      }
      out.values[v] = w.normalized();
    });
    out.normalized = true;
    return out;
  }
};

TraceRow make_row(int iter, double e, double gnorm, double t, int bt, const SphereField& u,
                  const Mesh& mesh) {
  TraceRow r;
  r.iter = iter;
  r.energy = e;
  r.grad_norm = gnorm;
  r.step = t;
  r.backtracks = bt;
  r.tangency = tangency_violation(u, mesh).max_violation;
  r.unit = unit_violation(u);
  return r;
}

}  // namespace

MinimizeResult minimize_G(const Mesh& mesh, const SphereField& init, const EnergyParams& params,
                          const MinimizeOptions& opts) {
  opts.validate();
  params.validate();
  require(init.size() == mesh.size(), "initial field and mesh sizes differ");
  SphereField u = renormalize(init);
  if (opts.boundary_mode == BoundaryMode::Tangential) {
    const auto tv = tangency_violation(u, mesh);
    require(tv.max_violation <= 1e-8, "initial field violates tangency at node " +
                                          std::to_string(tv.argmax));
  }

  Descent D{mesh, params, std::vector<char>(mesh.size(), 0)};
  for (NodeIndex v = 0; v < mesh.size(); ++v)
    D.free[v] = mesh.tags[v] == NodeTag::Interior ||
                (mesh.tags[v] == NodeTag::Graph && opts.boundary_mode == BoundaryMode::Tangential);

  MinimizeResult res;
  MinimizeTrace& tr = res.trace;
  double E = energy_G_value(u, mesh, params);
  auto g = D.gradient(u);
  double gn2 = D.metric_norm2(g);
  tr.rows.push_back(make_row(0, E, std::sqrt(gn2), 0.0, 0, u, mesh));

  double t = opts.step0;
  for (int it = 1;; ++it) {
    if (std::sqrt(gn2) <= opts.grad_tol) {
      tr.converged = true;
      tr.stop_reason = "grad_tol";
      break;
    }
    if (it > opts.max_iters) {
      tr.stop_reason = "max_iters";
      break;
    }
    const double scale = std::max(1.0, std::abs(E));
    SphereField trial;
    double E_new = 0.0;
    int bt = 0;
    bool accepted = false;
    for (; bt < opts.max_backtracks; ++bt) {
      trial = D.step(u, g, t);
      E_new = energy_G_value(trial, mesh, params);
      if (E_new <= E - opts.armijo_c * t * gn2) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) {
      if (t / std::pow(opts.backtrack, bt) * gn2 <= 1e-13 * scale) {
        tr.converged = true;
        tr.stop_reason = "energy_resolution";
        break;
      }
      tr.stop_reason = "stall";
      throw StallError("line search failed " + std::to_string(opts.max_backtracks) +
                           " times at iteration " + std::to_string(it),
                       tr);
    }

    auto g_new = D.gradient(trial);
    // Barzilai-Borwein step in the volume-weighted metric.
    double sMs = 0.0, sy = 0.0;
    sMs = parallel::sum(mesh.size(), [&](std::size_t v) {
      return mesh.volume[v] * (trial.values[v] - u.values[v]).squaredNorm();
    });
    sy = parallel::sum(mesh.size(), [&](std::size_t v) {
      return (trial.values[v] - u.values[v]).dot(g_new[v] - g[v]);
    });
    const double t_used = t;
    t = (sy > 0.0 && sMs > 0.0) ? sMs / sy : 2.0 * t;

    const double decrease = E - E_new;
    u = std::move(trial);
    g = std::move(g_new);
    gn2 = D.metric_norm2(g);
    E = E_new;
    tr.rows.push_back(make_row(it, E, std::sqrt(gn2), t_used, bt, u, mesh));
    if (decrease <= opts.energy_tol * scale) {
      tr.converged = true;
      tr.stop_reason = "energy_tol";
      break;
    }
  }
  res.field = std::move(u);
  return res;
}

ElResidual el_residual(const SphereField& u, const Mesh& mesh) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  ElResidual r;
  std::vector<double> res2(mesh.size(), 0.0);
  std::vector<char> used(mesh.size(), 0);
  parallel::for_each_index(mesh.size(), [&](std::size_t v) {
    if (mesh.tags[v] != NodeTag::Interior) return;
    const auto& nb = mesh.neighbors[v];
    Vec3 lap = Vec3::Zero();
    double grad2 = 0.0;
    const Vec3& p = mesh.points[v];
    for (int a = 0; a < 3; ++a) {
      const NeighborSlot& m = nb[2 * a];
      const NeighborSlot& q = nb[2 * a + 1];
      if (m.node == kNoNode || q.node == kNoNode) return;
      for (int b = 0; b < 3; ++b) {
        if (b == a) continue;
        if (std::abs(mesh.points[m.node][b] - p[b]) > 1e-12 ||
            std::abs(mesh.points[q.node][b] - p[b]) > 1e-12)
          return;
      }
      const double dm = p[a] - mesh.points[m.node][a];
      const double dq = mesh.points[q.node][a] - p[a];
      const Vec3& um = u.values[m.node];
      const Vec3& uq = u.values[q.node];
      lap += 2.0 * ((uq - u.values[v]) / dq - (u.values[v] - um) / dm) / (dm + dq);
      grad2 += ((uq - um) / (dm + dq)).squaredNorm();
    }
    const Vec3 rv = lap + grad2 * u.values[v];
    res2[v] = rv.squaredNorm();
    used[v] = 1;
  });
  double l2 = 0.0;
  for (NodeIndex v = 0; v < mesh.size(); ++v) {
    if (!used[v]) continue;
    ++r.interior_nodes;
    l2 += mesh.volume[v] * res2[v];
    r.interior_max = std::max(r.interior_max, std::sqrt(res2[v]));
  }
  r.interior_l2 = std::sqrt(l2);

  r.histogram.assign(20, 0);
  for (const auto& sp : mesh.surface) {
    if (mesh.tags[sp.node] != NodeTag::Graph) continue;
    const double c = u.values[sp.node].dot(sp.normal);
    const double dist = std::min({std::abs(c), std::abs(c - 1.0), std::abs(c + 1.0)});
    r.boundary_max_distance = std::max(r.boundary_max_distance, dist);
    const int bin = std::clamp(static_cast<int>(std::floor((c + 1.0) / 0.1)), 0, 19);
    ++r.histogram[static_cast<std::size_t>(bin)];
    ++r.boundary_nodes;
  }
  return r;
}

GradientCheck gradient_check(const Mesh& mesh, const EnergyParams& params, int fields,
                             int nodes_per_field, double step, std::uint64_t seed) {
  require(step > 0.0, "gradient_check: step must be positive");
  require(fields >= 1 && nodes_per_field >= 1, "gradient_check: trials must be at least 1");
  require(mesh.size() > 0, "gradient_check: empty mesh");
  params.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> pick(0, mesh.size() - 1);
  auto random_vec = [&] { return Vec3(normal(rng), normal(rng), normal(rng)); };

  GradientCheck out;
  for (int f = 0; f < fields; ++f) {
    SphereField u;
    u.values.resize(mesh.size());
    for (NodeIndex v = 0; v < mesh.size(); ++v) {
      Vec3 w = random_vec();
      const NodeIndex si = mesh.graph_surface_index[v];
      if (si != kNoNode) w -= w.dot(mesh.surface[si].normal) * mesh.surface[si].normal;
      u.values[v] = w.normalized();
    }
    u.normalized = true;
    const auto g = grad_G(u, mesh, params);
    for (int k = 0; k < nodes_per_field; ++k) {
      const NodeIndex v = pick(rng);
      const Vec3 psi = project_admissible(random_vec(), u.values[v], mesh, v).normalized();
      const double analytic = g[v].dot(psi);
      SphereField up = u, um = u;
      up.values[v] += step * psi;
      um.values[v] -= step * psi;
      const double fd =
          (energy_G_value(up, mesh, params) - energy_G_value(um, mesh, params)) / (2.0 * step);
      const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-300});
      out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic - fd) / denom);
      ++out.comparisons;
    }
  }
  return out;
}

}  // namespace harmap
