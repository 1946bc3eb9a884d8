#include "harmap/constructions.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace harmap {

namespace {

struct ImplicitSurface {
  std::string name;
  std::function<double(const Vec3&)> F;
  std::function<Vec3(const Vec3&)> gradF;
  std::function<Vec3(const Vec3&, const Vec3&)> field;  // (point, normal) -> raw tangent
  Vec3 lo, hi;                                          // bounding box
  double base_spacing = 0.0;                            // lattice spacing at resolution 1
  std::vector<Vec3> zeros;
};

Vec3 project_to_surface(const ImplicitSurface& s, Vec3 q) {
  for (int it = 0; it < 60; ++it) {
    const double f = s.F(q);
    const Vec3 g = s.gradF(q);
    const double g2 = g.squaredNorm();
    if (!(g2 > 0.0)) throw NumericalError("surface projection hit a critical point of F");
    q -= (f / g2) * g;
    if (std::abs(f) < 1e-15) break;
  }
  return q;
}

ImplicitSurface sphere() {
  ImplicitSurface s;
  s.name = "sphere";
  s.F = [](const Vec3& p) { return p.squaredNorm() - 1.0; };
  s.gradF = [](const Vec3& p) { return Vec3(2.0 * p); };
  s.field = [](const Vec3&, const Vec3& nu) { return Vec3(Vec3::UnitZ().cross(nu)); };
  s.lo = Vec3::Constant(-1.2);
  s.hi = Vec3::Constant(1.2);
  s.base_spacing = 2.4;
  s.zeros = {Vec3::UnitZ(), -Vec3::UnitZ()};
  return s;
}

constexpr double kMajor = 1.0;
constexpr double kMinor = 0.4;

ImplicitSurface torus() {
  ImplicitSurface s;
  s.name = "torus";
  s.F = [](const Vec3& p) {
    const double rho = std::hypot(p.x(), p.y());
    return (rho - kMajor) * (rho - kMajor) + p.z() * p.z() - kMinor * kMinor;
  };
  s.gradF = [](const Vec3& p) {
    const double rho = std::hypot(p.x(), p.y());
    const double c = 2.0 * (rho - kMajor) / rho;
    return Vec3(c * p.x(), c * p.y(), 2.0 * p.z());
  };
  s.field = [](const Vec3& p, const Vec3&) { return Vec3(-p.y(), p.x(), 0.0); };
  s.lo = Vec3(-1.5, -1.5, -0.5);
  s.hi = Vec3(1.5, 1.5, 0.5);
  s.base_spacing = 3.0;
  return s;
}

// Tube {f^2 + z^2 = c} around the figure-eight f = x^4 - x^2 + y^2 = 0.
constexpr double kTube = 0.01;

ImplicitSurface genus_two() {
  ImplicitSurface s;
  s.name = "double_torus";
  s.F = [](const Vec3& p) {
    const double x2 = p.x() * p.x();
    const double f = x2 * x2 - x2 + p.y() * p.y();
    return f * f + p.z() * p.z() - kTube;
  };
  s.gradF = [](const Vec3& p) {
    const double x2 = p.x() * p.x();
    const double f = x2 * x2 - x2 + p.y() * p.y();
    return Vec3(2.0 * f * (4.0 * x2 * p.x() - 2.0 * p.x()), 2.0 * f * 2.0 * p.y(), 2.0 * p.z());
  };
  s.field = [](const Vec3&, const Vec3& nu) { return Vec3(nu.cross(Vec3::UnitX())); };
  s.lo = Vec3(-1.15, -0.65, -0.15);
  s.hi = Vec3(1.15, 0.65, 0.15);
  s.base_spacing = 0.96;
  // Zeros of nu x e1: y = z = 0 and x^4 - x^2 = +-sqrt(c).
  const double t = std::sqrt(kTube);
  for (double level : {t, -t}) {
    const double disc = 1.0 + 4.0 * level;
    for (double sgn : {1.0, -1.0}) {
      const double x2 = 0.5 * (1.0 + sgn * std::sqrt(disc));
      if (x2 <= 0.0) continue;
      const double x = std::sqrt(x2);
      s.zeros.emplace_back(x, 0.0, 0.0);
      s.zeros.emplace_back(-x, 0.0, 0.0);
    }
  }
  return s;
}

Vec3 unit_normal(const ImplicitSurface& s, const Vec3& p) { return s.gradF(p).normalized(); }

void tangent_pair(const Vec3& nu, Vec3& t1, Vec3& t2) {
  const Vec3 ref = std::abs(nu.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = (ref - ref.dot(nu) * nu).normalized();
  t2 = nu.cross(t1);
}

// Sign of the Gaussian curvature at p via the bordered Hessian of F.
int curvature_sign(const ImplicitSurface& s, const Vec3& p) {
  const double step = 1e-5;
  Eigen::Matrix4d B = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = step;
    const Vec3 col = (s.gradF(p + e) - s.gradF(p - e)) / (2.0 * step);
    B.block<3, 1>(0, j) = col;
  }
  const Mat3 H = 0.5 * (B.block<3, 3>(0, 0) + B.block<3, 3>(0, 0).transpose());
  B.block<3, 3>(0, 0) = H;
  const Vec3 g = s.gradF(p);
  B.block<3, 1>(0, 3) = g;
  B.block<1, 3>(3, 0) = g.transpose();
  const double K = -B.determinant();
  if (std::abs(K) < 1e-10) throw NumericalError("degenerate zero of the tangent field");
  return K > 0.0 ? 1 : -1;
}

VortexRecord classify_zero(const ImplicitSurface& s, const Vec3& center) {
  VortexRecord rec;
  rec.center = project_to_surface(s, center);
  rec.normal = unit_normal(s, rec.center);
  rec.index = curvature_sign(s, rec.center);
  Vec3 t1, t2;
  tangent_pair(rec.normal, t1, t2);
  constexpr int kLoop = 64;
  constexpr double kRadius = 1e-3;
  std::vector<Vec2> samples;
  double turning = 0.0;
  for (int k = 0; k < kLoop; ++k) {
    const double th = 2.0 * std::numbers::pi * k / kLoop;
    const Vec3 off = kRadius * (std::cos(th) * t1 + std::sin(th) * t2);
    const Vec3 q = project_to_surface(s, rec.center + off);
    const Vec3 g = s.field(q, unit_normal(s, q));
    samples.emplace_back(g.dot(t1), g.dot(t2));
    turning += rec.normal.dot(off.cross(g)) / g.norm();
  }
  rec.winding = vortex_index(samples);
  if (rec.winding < 0)
    rec.chart = "saddle";
  else
    rec.chart = turning > 0.0 ? "phi" : "phi_tilde";
  return rec;
}

}  // namespace

TangentBoundaryData genus_boundary_field(int genus, int resolution) {
  require(genus >= 0 && genus <= 2, "unsupported genus (supported: 0, 1, 2)");
  require(resolution >= 8 && resolution <= 512, "resolution must lie in [8, 512]");
  const ImplicitSurface s = genus == 0 ? sphere() : genus == 1 ? torus() : genus_two();

  TangentBoundaryData out;
  out.genus = genus;
  out.surface = s.name;
  out.euler_characteristic = 2 * (1 - genus);

  // Lattice points within one spacing of the surface, pulled onto it.
  const double hs = s.base_spacing / resolution;
  const Vec3 ext = s.hi - s.lo;
  const int n[3] = {static_cast<int>(std::ceil(ext.x() / hs)), static_cast<int>(std::ceil(ext.y() / hs)),
                    static_cast<int>(std::ceil(ext.z() / hs))};
  for (int k = 0; k <= n[2]; ++k)
    for (int j = 0; j <= n[1]; ++j)
      for (int i = 0; i <= n[0]; ++i) {
        const Vec3 q = s.lo + hs * Vec3(i, j, k);
        const Vec3 g = s.gradF(q);
        const double gn = g.norm();
        if (!(gn > 0.0) || std::abs(s.F(q)) / gn >= 0.5 * hs) continue;
        BoundaryNode node;
        node.position = project_to_surface(s, q);
        node.normal = unit_normal(s, node.position);
        const Vec3 raw = s.field(node.position, node.normal);
        if (raw.norm() < 1e-9) continue;  // vortex centre cell
        node.value = raw.normalized();
        out.max_tangency = std::max(out.max_tangency, std::abs(node.value.dot(node.normal)));
        out.nodes.push_back(node);
      }

  for (const Vec3& z : s.zeros) {
    out.vortices.push_back(classify_zero(s, z));
    out.ledger_sum += out.vortices.back().index;
  }
  return out;
}

}  // namespace harmap
