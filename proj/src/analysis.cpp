#include "harmap/analysis.hpp"

#include "harmap/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace harmap {

void BoundReport::add(double value, double bound, const std::string& where) {
  const double m = bound - value;
  const bool bad = strict ? (bound > 0.0 ? value >= bound : value > 0.0) : value > bound;
  if (bad) ++violations;
  if (samples == 0 || m < margin) {
    margin = m;
    cap = bound;
    measured = value;
    worst = where;
  }
  ++samples;
}

namespace {

using Rng = std::mt19937_64;

BoundReport named_report(const std::string& name) {
  BoundReport r;
  r.name = name;
  return r;
}

Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> n;
  Vec3 v;
  do v = Vec3(n(rng), n(rng), n(rng));
  while (v.norm() < 1e-6);
  return v.normalized();
}

Vec2 random_in_disk(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return Vec2(r * std::cos(t), r * std::sin(t));
}

double op_norm(const Mat3& m) {
  return Eigen::JacobiSVD<Mat3>(m).singularValues()(0);
}

std::string describe(const std::string& label, const Vec2& p) {
  std::ostringstream os;
  os.precision(6);
  os << label << " at (" << p.x() << ", " << p.y() << ")";
  return os.str();
}

}  // namespace

std::vector<GraphFn> random_graphs(std::size_t count, double lip_max, std::uint64_t seed) {
  require(lip_max > 0.0 && lip_max <= 1.0, "random_graphs: lip_max must lie in (0, 1]");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GraphFn> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GraphParams p;
    if (i % 2 == 0) {
      const double a = lip_max * (2.0 * u(rng) - 1.0);
      p.scalars["a"] = a;
      out.push_back(make_graph_fn(GraphKind::Paraboloid, p));
    } else {
      const double omega = 0.5 + 3.5 * u(rng);
      const double a = (lip_max / omega) * (0.05 + 0.95 * u(rng));
      p.scalars["a"] = u(rng) < 0.5 ? a : -a;
      p.scalars["omega"] = omega;
      out.push_back(make_graph_fn(GraphKind::Sinusoid, p));
    }
  }
  return out;
}

std::vector<BoundReport> verify_rotation_bounds(const std::vector<GraphFn>& graphs,
                                                std::size_t samples_per_graph,
                                                std::uint64_t seed) {
  BoundReport qn = named_report("rotation_displacement");
  BoundReport dq = named_report("rotation_derivative");
  dq.strict = true;
  BoundReport qij = named_report("rotation_entry_sup");
  BoundReport shape = named_report("shape_operator");
  Rng rng(seed);
  const double t = 1e-6;
  double at_origin = -1.0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const GraphFn& g = graphs[gi];
    require(g.lip() <= 1.0, "verify_rotation_bounds: graph with Lip > 1");
    const Mat3 Q0 = rotation_from_gradient(g.grad(Vec2::Zero())).Q;
    at_origin = std::max(at_origin, Q0.maxCoeff());
    const std::string tag = "graph " + std::to_string(gi) + " (" + to_string(g.kind()) + ")";
    for (std::size_t s = 0; s < samples_per_graph; ++s) {
      const Vec2 p = random_in_disk(rng, 1.0);
      const Vec3 n = random_unit(rng);
      const Mat3 Q = rotation_from_gradient(g.grad(p)).Q;
      const std::string where = describe(tag, p);
      qn.add((Q * n - n).norm(), 9.0 * g.lip(), where);
      qij.add(Q.maxCoeff(), 1.0, where);
      double dmax = 0.0;
      for (int k = 0; k < 2; ++k) {
        const Vec2 e = Vec2::Unit(k) * t;
        const Mat3 d = (rotation_from_gradient(g.grad(p + e)).Q -
                        rotation_from_gradient(g.grad(p - e)).Q) / (2.0 * t);
        dmax = std::max(dmax, d.cwiseAbs().maxCoeff());
      }
      dq.add(dmax, 6.0 * g.lip2(), where);
      shape.add(surface_frame(g, p).shape.cwiseAbs().maxCoeff(), 3.0 * g.lip2(), where);
    }
  }
  qij.add(at_origin, 1.0, "origin");
  qij.extra["value_at_origin"] = at_origin;
  return {qn, dq, qij, shape};
}

std::vector<BoundReport> verify_projection_bounds(const ProjectionSuiteOptions& opts) {
  require(opts.min_cross > 1e-8, "min_cross must exceed 1e-8");
  require(opts.fd_step > 0.0, "fd_step must be positive");
  const auto graphs = random_graphs(16, 1.0, opts.seed + 1);
  Rng rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto cube = [&] { return Vec3(uni(rng), uni(rng), uni(rng)); };
  auto admissible_y = [&](const Vec3& nu, double min_cross, double radius) {
    Vec3 y;
    do y = radius * cube();
    while (y.cross(nu).norm() < min_cross);
    return y;
  };

  // 1. Analytic derivatives against central differences.
  BoundReport fd = named_report("projection_derivatives_fd");
  const double t = opts.fd_step;
  for (std::size_t s = 0; s < opts.derivative_samples; ++s) {
    const GraphFn& g = graphs[s % graphs.size()];
    const Vec2 p = random_in_disk(rng, 0.9);
    const SurfaceFrame fr = surface_frame(g, p);
    ProjectionQuery q;
    q.x = Vec3(p.x(), p.y(), g.eval(p));
    q.nu = fr.normal;
    q.y = admissible_y(q.nu, opts.min_cross, 1.5);
    q.z = cube();
    const Mat3 dnu = fr.shape.transpose();
    Mat3 fz, fy, fx = Mat3::Zero();
    for (int j = 0; j < 3; ++j) {
      ProjectionQuery a = q, b = q;
      a.z[j] += t;
      b.z[j] -= t;
      fz.col(j) = (tangent_line_projection(a) - tangent_line_projection(b)) / (2.0 * t);
      a = q;
      b = q;
      a.y[j] += t;
      b.y[j] -= t;
      fy.col(j) = (tangent_line_projection(a) - tangent_line_projection(b)) / (2.0 * t);
    }
    for (int j = 0; j < 2; ++j) {
      ProjectionQuery a = q, b = q;
      a.nu = surface_frame(g, p + t * Vec2::Unit(j)).normal;
      b.nu = surface_frame(g, p - t * Vec2::Unit(j)).normal;
      fx.col(j) = (tangent_line_projection(a) - tangent_line_projection(b)) / (2.0 * t);
    }
    auto rel = [](const Mat3& an, const Mat3& num) {
      return (an - num).norm() / std::max(1.0, an.norm());
    };
    const double err = std::max({rel(projection_dz(q), fz), rel(projection_dy(q), fy),
                                 rel(projection_dx(q, dnu), fx)});
    fd.add(err, 1e-6, describe("graph " + std::to_string(s % graphs.size()), p));
  }

  // 2. |dPi/dz| <= 1 in operator norm.
  BoundReport dz = named_report("projection_dz_operator_norm");
  // 3. Cross-y difference, in the regime |y x nu| >= 1.
  BoundReport cy = named_report("projection_cross_y");
  // 4. Sharpened form sin(angle) <= |y1 - y2| / max|y x nu| on |y x nu| >= min_cross.
  BoundReport cys = named_report("projection_cross_y_sharp");
  std::size_t naive_fail = 0;
  for (std::size_t s = 0; s < opts.pair_samples; ++s) {
    const Vec3 nu = random_unit(rng);
    Vec3 e = random_unit(rng);
    e = (e - e.dot(nu) * nu).normalized();
    std::uniform_real_distribution<double> mag(1.0, 1.5), along(-0.5, 0.5);
    const Vec3 y1 = mag(rng) * e + along(rng) * nu;
    Vec3 y2;
    do y2 = y1 + 0.5 * cube();
    while (y2.cross(nu).norm() < 1.0);
    const Mat3 A1 = line_projector(y1, nu), A2 = line_projector(y2, nu);
    dz.add(op_norm(A1), 1.0 + 1e-12);
    cy.add(op_norm(A1 - A2), (y1 - y2).norm() + 1e-12);

    const Vec3 u1 = admissible_y(nu, opts.min_cross, 1.5);
    const Vec3 u2 = admissible_y(nu, opts.min_cross, 1.5);
    const double diff = op_norm(line_projector(u1, nu) - line_projector(u2, nu));
    const double wmax = std::max(u1.cross(nu).norm(), u2.cross(nu).norm());
    cys.add(diff, (u1 - u2).norm() / wmax + 1e-12);
    if (diff > (u1 - u2).norm() + 1e-12) ++naive_fail;
  }
  cys.extra["unsharpened_cap_violations"] = static_cast<double>(naive_fail);

  // 5. Cross-x: |A(x) - A(0)| <= C |nu(x) - nu(0)|, measured at two scales
  // with identical y samples. Per-sample cap |y| / max|y x nu|.
  BoundReport cx = named_report("projection_cross_x");
  double C[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    const double scale = level == 0 ? 0.5 : 0.25;
    Rng local(opts.seed + 7);
    std::uniform_real_distribution<double> lu(-1.0, 1.0);
    for (std::size_t s = 0; s < opts.derivative_samples; ++s) {
      const GraphFn& g = graphs[s % graphs.size()];
      const Vec2 p = random_in_disk(local, 1.0) * scale;
      const Vec3 nu1 = surface_frame(g, p).normal;
      const Vec3 nu0 = surface_frame(g, Vec2::Zero()).normal;
      Vec3 y;
      do y = 1.5 * Vec3(lu(local), lu(local), lu(local));
      while (y.cross(nu1).norm() < opts.min_cross || y.cross(nu0).norm() < opts.min_cross);
      const double dn = (nu1 - nu0).norm();
      if (dn < 1e-12) continue;
      const double ratio = op_norm(line_projector(y, nu1) - line_projector(y, nu0)) / dn;
      C[level] = std::max(C[level], ratio);
      const double wmax = std::max(y.cross(nu1).norm(), y.cross(nu0).norm());
      if (level == 0) cx.add(ratio, y.norm() / wmax + 1e-12, describe("graph " + std::to_string(s % graphs.size()), p));
    }
  }
  cx.extra["C_scale_0.5"] = C[0];
  cx.extra["C_scale_0.25"] = C[1];
  cx.extra["relative_change"] = std::abs(C[1] - C[0]) / std::max(C[0], 1e-300);

  // 6. dPi/dy - I is linear in z: C = max |dPi/dy - I| / |z|, cap 2 sqrt(3) / |y x nu|.
  BoundReport dy = named_report("projection_dy_linear");
  double Cy[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    const double zscale = level == 0 ? 1.0 : 0.5;
    Rng local(opts.seed + 3);
    std::uniform_real_distribution<double> lu(-1.0, 1.0);
    for (std::size_t s = 0; s < opts.derivative_samples; ++s) {
      ProjectionQuery q;
      q.nu = random_unit(local);
      do q.y = 1.5 * Vec3(lu(local), lu(local), lu(local));
      while (q.y.cross(q.nu).norm() < opts.min_cross);
      q.z = zscale * Vec3(lu(local), lu(local), lu(local));
      if (q.z.norm() < 1e-9) continue;
      const double ratio = op_norm(projection_dy(q) - Mat3::Identity()) / q.z.norm();
      Cy[level] = std::max(Cy[level], ratio);
      if (level == 0) dy.add(ratio, 2.0 * std::sqrt(3.0) / q.y.cross(q.nu).norm());
    }
  }
  dy.extra["C_z_scale_1"] = Cy[0];
  dy.extra["C_z_scale_0.5"] = Cy[1];
  dy.extra["relative_change"] = std::abs(Cy[1] - Cy[0]) / std::max(Cy[0], 1e-300);

  return {fd, dz, cy, cys, cx, dy};
}

namespace {

struct SmoothField {
  Vec3 base;
  std::array<Vec3, 3> k, b, c;

  Vec3 operator()(const Vec3& x) const {
    Vec3 v = base;
    for (int m = 0; m < 3; ++m) v += b[m] * std::cos(k[m].dot(x)) + c[m] * std::sin(k[m].dot(x));
    return v;
  }
};

SmoothField random_smooth_field(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SmoothField f;
  f.base = 3.0 * random_unit(rng);
  for (int m = 0; m < 3; ++m) {
    f.k[m] = 3.0 * Vec3(u(rng), u(rng), u(rng));
    f.b[m] = Vec3(u(rng), u(rng), u(rng)) / (3.0 * std::sqrt(3.0));
    f.c[m] = Vec3(u(rng), u(rng), u(rng)) / (3.0 * std::sqrt(3.0));
  }
  return f;
}

double poincare_ratio(const SphereField& u, const Mesh& mesh, bool& skipped) {
  const double grad = dirichlet_energy(u, mesh, 1.0, DirichletScale::FullK);
  if (grad < 1e-14) {
    skipped = true;
    return 0.0;
  }
  skipped = false;
  const Vec3 mean = boundary_mean(u, mesh);
  const double dev = parallel::sum(mesh.size(), [&](std::size_t v) {
    return mesh.volume[v] * (u.values[v] - mean).squaredNorm();
  });
  return dev / grad;
}

}  // namespace

PoincareReport poincare_experiment(std::size_t graphs, std::size_t fields_per_graph, double h,
                                   std::uint64_t seed) {
  require(graphs >= 1 && fields_per_graph >= 1, "poincare_experiment needs at least one sample");
  PoincareReport rep;
  rep.h = h;
  const auto gs = random_graphs(graphs, 0.5, seed);
  Rng rng(seed + 1);
  std::vector<SmoothField> fields;
  for (std::size_t i = 0; i < graphs * fields_per_graph; ++i) fields.push_back(random_smooth_field(rng));
  for (int level = 0; level < 2; ++level) {
    const double hh = level == 0 ? h : h / 2.0;
    double worst = 0.0;
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
      const GraphDomain dom = build_graph_domain(gs[gi], hh);
      for (std::size_t f = 0; f < fields_per_graph; ++f) {
        const SmoothField& sf = fields[gi * fields_per_graph + f];
        const SphereField u = make_field(sf, dom.mesh());
        bool skipped = false;
        const double r = poincare_ratio(u, dom.mesh(), skipped);
        if (skipped) {
          if (level == 0) ++rep.skipped;
          continue;
        }
        if (level == 0) ++rep.samples;
        worst = std::max(worst, r);
      }
    }
    (level == 0 ? rep.max_ratio_coarse : rep.max_ratio_fine) = worst;
  }
  rep.relative_change = std::abs(rep.max_ratio_fine - rep.max_ratio_coarse) /
                        std::max(rep.max_ratio_coarse, 1e-300);
  rep.bound.name = "poincare_refinement_stability";
  rep.bound.add(rep.relative_change, 0.2, "h -> h/2");
  rep.bound.extra["max_ratio_coarse"] = rep.max_ratio_coarse;
  rep.bound.extra["max_ratio_fine"] = rep.max_ratio_fine;
  if (!std::isfinite(rep.max_ratio_coarse) || !std::isfinite(rep.max_ratio_fine))
    ++rep.bound.violations;
  return rep;
}

std::vector<double> dyadic_radii(double R, int levels, double h) {
  require(R > 0.0 && levels >= 1, "dyadic radii need R > 0 and at least one level");
  std::vector<double> r(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    r[static_cast<std::size_t>(k)] = R / std::ldexp(1.0, k);
    require(r[static_cast<std::size_t>(k)] >= 2.0 * h * (1.0 - 1e-12),
            "dyadic radius R/2^k falls below 2h");
  }
  return r;
}

std::vector<DecayProfile> decay_scan(const SphereField& u, const Mesh& mesh,
                                     const std::vector<Vec3>& centers, double R, int levels) {
  const auto radii = dyadic_radii(R, levels, mesh.max_spacing());
  const auto density = dirichlet_density(u, mesh);
  const double total = parallel::sum(density.size(), [&](std::size_t v) { return density[v]; });
  std::vector<DecayProfile> out;
  for (const Vec3& a : centers) {
    std::vector<double> integrals;
    for (double r : radii) integrals.push_back(r * rescaled_energy(density, mesh, a, r));
    DecayProfile p = decay_fit(radii, integrals);
    p.center = a;
    p.smallness = total > 0.0 ? integrals.front() / total : 0.0;
    out.push_back(std::move(p));
  }
  return out;
}

SingularReport detect_singular(const SphereField& u, const Mesh& mesh, double threshold,
                               double r_min, double r_max,
                               const std::vector<NodeIndex>& candidates) {
  const double h = mesh.max_spacing();
  require(r_min >= 2.0 * h * (1.0 - 1e-12), "detect_singular: r_min must be >= 2h");
  require(r_max >= r_min, "detect_singular: r_max must be >= r_min");
  require(threshold > 0.0, "detect_singular: threshold must be positive");
  std::vector<double> radii;  // ascending
  for (double r = r_max; r >= r_min * (1.0 - 1e-12); r /= 2.0) radii.push_back(r);
  std::reverse(radii.begin(), radii.end());

  const auto cand = candidates.empty() ? mesh.nodes_with(NodeTag::Graph) : candidates;
  const auto density = dirichlet_density(u, mesh);
  std::vector<double> min_energy(cand.size(), -1.0);
  parallel::for_each_index(cand.size(), [&](std::size_t i) {
    double lowest = std::numeric_limits<double>::infinity();
    for (double r : radii) {
      const double e = rescaled_energy(density, mesh, mesh.points[cand[i]], r);
      lowest = std::min(lowest, e);
      if (e < threshold) return;
    }
    min_energy[i] = lowest;
  });

  SingularReport rep;
  rep.threshold = threshold;
  rep.r_min = radii.front();
  rep.r_max = radii.back();
  rep.tested = cand.size();
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (min_energy[i] < 0.0) continue;
    rep.flagged.push_back({cand[i], mesh.points[cand[i]], radii.front(), min_energy[i]});
  }
  return rep;
}

double vortex_reference_energy(const Mesh& mesh, const Vec3& center, double r) {
  const Vec2 c(center.x(), center.y());
  const SphereField u = make_field(
      [&](const Vec3& p) {
        const Vec2 v = vortex_field(Vec2(p.x(), p.y()) - c, 1);
        return Vec3(v.x(), v.y(), 0.0);
      },
      mesh);
  return rescaled_energy(u, mesh, center, r);
}

}  // namespace harmap
