#include "harmap/constructions.hpp"
#include "harmap/fields.hpp"
#include "harmap/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace harmap;

namespace {

const GraphDomain& flat16() {
  static const GraphDomain d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 16);
  return d;
}

}  // namespace

TEST(MakeField, Constant) {
  const Mesh& m = flat16().mesh();
  auto u = make_field([](const Vec3&) { return Vec3(0, 0, 1); }, m);
  EXPECT_TRUE(u.normalized);
  for (const auto& v : u.values) EXPECT_EQ(v, Vec3(0, 0, 1));
}

TEST(MakeField, NormalizesInput) {
  const Mesh& m = flat16().mesh();
  auto u = make_field([](const Vec3& x) { return Vec3(2 + x.x(), x.y(), 0); }, m);
  EXPECT_LE(unit_violation(u), 1e-15);
}

TEST(MakeField, ZeroRejected) {
  EXPECT_THROW(make_field([](const Vec3&) { return Vec3::Zero(); }, flat16().mesh()),
               ValidationError);
}

TEST(Renormalize, ScalesToUnit) {
  SphereField u;
  u.values = {Vec3(0, 0, 2)};
  EXPECT_EQ(renormalize(u).values[0], Vec3(0, 0, 1));
  u.values = {Vec3::Zero()};
  EXPECT_THROW(renormalize(u), ValidationError);
}

TEST(Renormalize, UnitUnchanged) {
  SphereField u;
  u.values = {Vec3(0.6, 0.8, 0), Vec3(0, 0, -1)};
  auto r = renormalize(u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE((r.values[i] - u.values[i]).norm(), 1e-16);
}

TEST(Renormalize, RandomNorms) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  SphereField u;
  for (int i = 0; i < 1000; ++i) u.values.emplace_back(N(rng), N(rng), N(rng));
  EXPECT_LE(unit_violation(renormalize(u)), 1e-15);
}

TEST(BoundaryMean, Constant) {
  const Mesh& m = flat16().mesh();
  auto u = make_field([](const Vec3&) { return Vec3(0, 1, 0); }, m);
  EXPECT_LE((boundary_mean(u, m) - Vec3(0, 1, 0)).norm(), 1e-14);
}

TEST(BoundaryMean, OppositeHalves) {
  const Mesh& m = flat16().mesh();
  // columns on x = 0 get e2 so the two halves match node for node
  auto u = make_field(
      [](const Vec3& x) {
        if (x.x() == 0.0) return Vec3(0, 1, 0);
        return Vec3(x.x() > 0 ? 1.0 : -1.0, 0, 0);
      },
      m);
  EXPECT_LE(std::abs(boundary_mean(u, m).x()), 1e-12);
}

TEST(BoundaryMean, VortexTrace) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 32);
  auto u = make_field(
      [](const Vec3& x) {
        const Vec2 p = x.head<2>() - Vec2(0.5 / 32, 0.5 / 32);
        const Vec2 v = vortex_field(p, 1);
        return Vec3(v.x(), v.y(), 0);
      },
      d.mesh());
  EXPECT_LE(boundary_mean(u, d.mesh()).norm(), 0.05);
}

TEST(Tangency, FlatCases) {
  const Mesh& m = flat16().mesh();
  auto eq = make_field([](const Vec3& x) { return Vec3(std::cos(x.x()), std::sin(x.x()), 0); }, m);
  EXPECT_EQ(tangency_violation(eq, m).max_violation, 0.0);
  auto north = make_field([](const Vec3&) { return Vec3(0, 0, 1); }, m);
  EXPECT_EQ(tangency_violation(north, m).max_violation, 1.0);
}

TEST(Tangency, RotatedEquatorOnParaboloid) {
  GraphParams p;
  p.scalars["a"] = 0.4;
  auto d = build_graph_domain(make_graph_fn(GraphKind::Paraboloid, p), 1.0 / 16);
  const Mesh& m = d.mesh();
  const auto rot = rotation_field(d);
  SphereField u;
  u.values.resize(m.size());
  for (NodeIndex v = 0; v < m.size(); ++v) {
    const double t = m.points[v].x() + 0.3 * m.points[v].y();
    u.values[v] = rot[m.column_of_node[v]].Q.transpose() * Vec3(std::cos(t), std::sin(t), 0);
  }
  EXPECT_LE(tangency_violation(u, m).max_violation, 1e-12);
}

TEST(UnitViolation, Empty) { EXPECT_EQ(unit_violation(SphereField{}), 0.0); }
