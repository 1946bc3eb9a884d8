#include "harmap/constructions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace harmap;

namespace {

constexpr double kPi = std::numbers::pi;

BlowupParams layered(double eps) {
  BlowupParams p;
  p.rho0 = kPi / 4;
  p.eps = eps;
  p.energy.K = 1.0;
  p.energy.K13 = 1.0;
  return p;
}

std::vector<Vec2> circle_samples(const std::function<Vec2(const Vec2&)>& f, double r, int n) {
  std::vector<Vec2> s;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * kPi * k / n;
    s.push_back(f(Vec2(r * std::cos(t), r * std::sin(t))));
  }
  return s;
}

}  // namespace

TEST(RhoEps, Branches) {
  const auto p = layered(0.1);
  EXPECT_DOUBLE_EQ(rho_eps(0.0, p), kPi / 4 + 0.1);
  EXPECT_NEAR(rho_eps(1.0, p), kPi / 4, 1e-15);
  EXPECT_NEAR(rho_eps(-1.0, p), kPi / 4, 1e-15);
  const double zc = 1.0 - 0.01;
  EXPECT_NEAR(rho_eps(zc, p), kPi / 4 + 0.1, 1e-14);
  EXPECT_NEAR(rho_eps(std::nextafter(zc, 2.0), p), kPi / 4 + 0.1, 1e-12);
  EXPECT_THROW(rho_eps(1.01, p), ValidationError);
}

TEST(LayeredField, UnitAndCore) {
  const auto p = layered(0.1);
  auto box = build_box_domain(1.0, 1.0, 0.0025, 4);
  const auto u = oldano_barbero_field(p, box);
  EXPECT_LE(unit_violation(u), 1e-15);
  const Mesh& m = box.mesh();
  const Vec3 want(std::cos(kPi / 4 + 0.1), 0, std::sin(kPi / 4 + 0.1));
  bool seen = false;
  for (NodeIndex v = 0; v < m.size(); ++v)
    if (std::abs(m.points[v].z()) < 1e-12) {
      EXPECT_LE((u.values[v] - want).norm(), 1e-15);
      seen = true;
    }
  EXPECT_TRUE(seen);
}

TEST(LayeredField, UnderResolvedRejected) {
  auto box = build_box_domain(1.0, 1.0, 0.01, 4);
  EXPECT_THROW(oldano_barbero_field(layered(0.1), box), ValidationError);
}

TEST(LayeredField, EpsMustFitInBox) {
  auto p = layered(1.2);
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(ClosedForm, Values) {
  EXPECT_NEAR(closed_form_blowup_energy(layered(0.1)), -56.0 / 3.0, 1e-12);
  auto p = layered(0.1);
  p.energy.K13 = 0.0;
  EXPECT_NEAR(closed_form_blowup_energy(p), 4.0 / 3.0, 1e-15);
  p = layered(0.1);
  p.rho0 = kPi / 2;
  const double a = closed_form_blowup_energy(p);
  p.eps = 0.3;
  EXPECT_NEAR(a, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(closed_form_blowup_energy(p), 4.0 / 3.0, 1e-14);
}

TEST(Blowup, TenPercentLayer) {
  const auto r = blowup_energy(layered(0.1));
  EXPECT_NEAR(r.h, 0.0025, 1e-15);
  EXPECT_LE(r.relative_error, 0.02);
  EXPECT_NEAR(r.closed_form, -56.0 / 3.0, 1e-12);
}

TEST(VortexField, Values) {
  EXPECT_LE((vortex_field(Vec2(1, 0), 1) - Vec2(0, 1)).norm(), 1e-16);
  EXPECT_LE((vortex_field(Vec2(0, 1), 1) - Vec2(-1, 0)).norm(), 1e-16);
  EXPECT_LE((vortex_field(Vec2(0, 2), -1) - Vec2(1, 0)).norm(), 1e-16);
  EXPECT_THROW(vortex_field(Vec2::Zero(), 1), ValidationError);
  EXPECT_THROW(vortex_field(Vec2(1, 0), 0), ValidationError);
}

TEST(VortexIndex, Windings) {
  EXPECT_EQ(vortex_index(circle_samples([](const Vec2& x) { return vortex_field(x, 1); }, 0.5, 64)), 1);
  EXPECT_EQ(vortex_index(circle_samples([](const Vec2&) { return Vec2(1, 0); }, 0.5, 64)), 0);
  // reflected chart (x2, -x1)/|x|: winding is measured, not assumed
  EXPECT_EQ(vortex_index(circle_samples([](const Vec2& x) { return vortex_field(x, -1); }, 0.5, 64)), 1);
  EXPECT_EQ(vortex_index(circle_samples([](const Vec2& x) { return Vec2(x.x(), -x.y()); }, 0.5, 64)), -1);
  EXPECT_EQ(vortex_index(circle_samples([](const Vec2& x) {
              const double t = 2 * std::atan2(x.y(), x.x());
              return Vec2(std::cos(t), std::sin(t));
            }, 0.5, 64)), 2);
}

TEST(VortexIndex, Undersampled) {
  EXPECT_THROW(vortex_index({Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}), NumericalError);
  EXPECT_THROW(vortex_index({Vec2(1, 0), Vec2(0, 0), Vec2(0, 1)}), ValidationError);
  EXPECT_THROW(vortex_index({Vec2(1, 0), Vec2(0, 1)}), ValidationError);
}

TEST(VortexNorm, Richardson) {
  const auto a = w1p_vortex_richardson(1.5, 1.0 / 64);
  EXPECT_NEAR(a.extrapolated, 4 * kPi, 0.03 * 4 * kPi);
  const auto b = w1p_vortex_richardson(1.0, 1.0 / 64);
  EXPECT_NEAR(b.extrapolated, 2 * kPi, 0.03 * 2 * kPi);
  const auto c = w1p_vortex_richardson(2.0, 1.0 / 64);
  EXPECT_NEAR(c.fine - c.coarse, 2 * kPi * std::log(2.0), 0.1 * 2 * kPi * std::log(2.0));
  EXPECT_EQ(c.extrapolated, c.fine);
}

TEST(VortexNorm, Preconditions) {
  EXPECT_THROW(w1p_vortex_norm(0.5, 0.1), ValidationError);
  EXPECT_THROW(w1p_vortex_norm(2.5, 0.1), ValidationError);
  EXPECT_THROW(w1p_vortex_norm(1.5, 0.5), ValidationError);
  EXPECT_THROW(w1p_vortex_norm(1.5, 0.0), ValidationError);
}

TEST(Genus, Sphere) {
  const auto d = genus_boundary_field(0, 32);
  EXPECT_EQ(d.euler_characteristic, 2);
  EXPECT_EQ(d.ledger_sum, 2);
  ASSERT_EQ(d.vortices.size(), 2u);
  for (const auto& v : d.vortices) {
    EXPECT_EQ(v.index, 1);
    EXPECT_EQ(v.winding, v.index);
    EXPECT_NE(v.chart, "saddle");
  }
  EXPECT_NE(d.vortices[0].chart, d.vortices[1].chart);
}

TEST(Genus, TorusHasNoZeros) {
  const auto d = genus_boundary_field(1, 32);
  EXPECT_EQ(d.euler_characteristic, 0);
  EXPECT_EQ(d.ledger_sum, 0);
  EXPECT_TRUE(d.vortices.empty());
  EXPECT_LE(d.max_tangency, 1e-12);
}

TEST(Genus, DoubleTorus) {
  const auto d = genus_boundary_field(2, 32);
  EXPECT_EQ(d.euler_characteristic, -2);
  EXPECT_EQ(d.ledger_sum, -2);
  int saddles = 0;
  for (const auto& v : d.vortices) {
    EXPECT_EQ(v.winding, v.index);
    saddles += v.chart == "saddle";
  }
  EXPECT_EQ(saddles, 4);
  EXPECT_EQ(d.vortices.size(), 6u);
}

TEST(Genus, UnitTangentValues) {
  const auto d = genus_boundary_field(2, 24);
  ASSERT_FALSE(d.nodes.empty());
  for (const auto& n : d.nodes) {
    EXPECT_NEAR(n.value.norm(), 1.0, 1e-12);
    EXPECT_NEAR(n.normal.norm(), 1.0, 1e-12);
  }
}

TEST(Genus, Preconditions) {
  EXPECT_THROW(genus_boundary_field(3), ValidationError);
  EXPECT_THROW(genus_boundary_field(0, 4), ValidationError);
}

TEST(Rotation, FlatIsIdentity) {
  EXPECT_EQ(rotation_from_gradient(Vec2::Zero()).Q, Mat3::Identity());
}

TEST(Rotation, TiltedNormalToNorthPole) {
  const auto f = surface_frame(
      [] {
        GraphParams p;
        p.scalars["a"] = 1.0;
        return make_graph_fn(GraphKind::Paraboloid, p);
      }(),
      Vec2(1.0, 0.0));
  EXPECT_LE((f.normal - Vec3(-1, 0, 1) / std::sqrt(2.0)).norm(), 1e-15);
  const auto s = rotation_field(f);
  EXPECT_LE((s.Q * f.normal - Vec3::UnitZ()).norm(), 1e-12);
}

TEST(Rotation, IsRotation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Vec2 g(U(rng), U(rng));
    const auto s = rotation_from_gradient(g);
    EXPECT_LE((s.Q.transpose() * s.Q - Mat3::Identity()).norm(), 1e-14);
    EXPECT_NEAR(s.Q.determinant(), 1.0, 1e-14);
    const Vec3 nu = Vec3(-g.x(), -g.y(), 1).normalized();
    EXPECT_LE((s.Q * nu - Vec3::UnitZ()).norm(), 1e-14);
  }
}

TEST(Projection, Examples) {
  ProjectionQuery q;
  q.y = Vec3(1, 0, 0);
  q.nu = Vec3(0, 0, 1);
  q.z = Vec3(1, 2, 3);
  EXPECT_LE((tangent_line_projection(q) - Vec3(1, 2, 0)).norm(), 1e-15);
  q.z = Vec3(5, 0, -2);  // orthogonal to y x nu
  EXPECT_LE((tangent_line_projection(q) - q.y).norm(), 1e-15);
  q.z = q.y.cross(q.nu);
  EXPECT_LE((tangent_line_projection(q) - (q.y + q.z)).norm(), 1e-15);
}

TEST(Projection, DegenerateLine) {
  EXPECT_THROW(line_projector(Vec3(0, 0, 1), Vec3(0, 0, 1)), ValidationError);
}

TEST(Projection, ProjectorIsIdempotent) {
  const Mat3 P = line_projector(Vec3(0.3, -0.2, 0.9), Vec3(0.1, 0.2, 1.0).normalized());
  EXPECT_LE((P * P - P).norm(), 1e-15);
  EXPECT_LE((P - P.transpose()).norm(), 1e-16);
  EXPECT_NEAR(P.trace(), 1.0, 1e-15);
}
