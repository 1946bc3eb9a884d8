#include "harmap/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace harmap;

namespace {

const BoundReport& find(const std::vector<BoundReport>& reps, const std::string& name) {
  for (const auto& r : reps)
    if (r.name == name) return r;
  throw std::runtime_error("no report " + name);
}

GraphFn paraboloid(double a) {
  GraphParams p;
  p.scalars["a"] = a;
  return make_graph_fn(GraphKind::Paraboloid, p);
}

}  // namespace

TEST(BoundReport, NonStrict) {
  BoundReport r;
  r.add(1.0, 2.0, "a");
  r.add(2.0, 2.0, "b");
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.samples, 2u);
  EXPECT_EQ(r.margin, 0.0);
  EXPECT_EQ(r.worst, "b");
  r.add(3.0, 2.5, "c");
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.violations, 1u);
  EXPECT_EQ(r.measured, 3.0);
}

TEST(BoundReport, Strict) {
  BoundReport r;
  r.strict = true;
  r.add(1.0, 1.0);
  EXPECT_EQ(r.violations, 1u);
  BoundReport z;
  z.strict = true;
  z.add(0.0, 0.0);
  EXPECT_TRUE(z.passed());
  z.add(1e-300, 0.0);
  EXPECT_FALSE(z.passed());
}

TEST(RandomGraphs, Admissible) {
  const auto gs = random_graphs(30, 0.5, 3);
  ASSERT_EQ(gs.size(), 30u);
  for (const auto& g : gs) {
    EXPECT_LE(g.lip(), 0.5);
    EXPECT_EQ(g.eval(Vec2::Zero()), 0.0);
  }
  EXPECT_EQ(gs[0].kind(), GraphKind::Paraboloid);
  EXPECT_EQ(gs[1].kind(), GraphKind::Sinusoid);
}

TEST(RotationBounds, Flat) {
  const auto reps = verify_rotation_bounds({make_graph_fn(GraphKind::Flat)}, 200);
  ASSERT_EQ(reps.size(), 4u);
  for (const auto& r : reps) {
    EXPECT_TRUE(r.passed()) << r.name;
  }
  EXPECT_EQ(find(reps, "rotation_displacement").measured, 0.0);
  EXPECT_EQ(find(reps, "rotation_derivative").measured, 0.0);
  EXPECT_EQ(find(reps, "shape_operator").measured, 0.0);
  EXPECT_EQ(find(reps, "rotation_entry_sup").measured, 1.0);
  EXPECT_EQ(find(reps, "rotation_entry_sup").extra.at("value_at_origin"), 1.0);
}

TEST(RotationBounds, Paraboloid) {
  const auto reps = verify_rotation_bounds({paraboloid(0.4)}, 1000);
  const auto& d = find(reps, "rotation_displacement");
  EXPECT_LE(d.measured, 3.6);
  EXPECT_GT(d.margin, 0.0);
  for (const auto& r : reps) EXPECT_TRUE(r.passed()) << r.name;
}

TEST(RotationBounds, RandomGraphs) {
  for (const auto& r : verify_rotation_bounds(random_graphs(20, 1.0, 8), 200))
    EXPECT_TRUE(r.passed()) << r.name << " worst " << r.worst;
}

TEST(ProjectionBounds, SmallSuite) {
  ProjectionSuiteOptions o;
  o.derivative_samples = 100;
  o.pair_samples = 1000;
  const auto reps = verify_projection_bounds(o);
  ASSERT_EQ(reps.size(), 6u);
  for (const auto& r : reps) EXPECT_TRUE(r.passed()) << r.name << " worst " << r.worst;
}

TEST(ProjectionBounds, UnitLineNorm) {
  const Mat3 P = line_projector(Vec3(1, 0, 0), Vec3(0, 0, 1));
  Eigen::JacobiSVD<Mat3> svd(P);
  EXPECT_NEAR(svd.singularValues()(0), 1.0, 1e-15);
  EXPECT_EQ((line_projector(Vec3(0.2, 0.4, 0.1), Vec3::UnitZ()) -
             line_projector(Vec3(0.2, 0.4, 0.1), Vec3::UnitZ()))
                .norm(),
            0.0);
}

TEST(Poincare, SmallExperiment) {
  const auto r = poincare_experiment(3, 2, 0.125);
  EXPECT_EQ(r.samples + r.skipped, 6u);
  EXPECT_TRUE(std::isfinite(r.max_ratio_coarse));
  EXPECT_TRUE(std::isfinite(r.max_ratio_fine));
  EXPECT_GT(r.max_ratio_coarse, 0.0);
  EXPECT_LE(r.relative_change, 0.2);
}

TEST(DyadicRadii, Levels) {
  const auto r = dyadic_radii(0.5, 4, 1.0 / 32);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[3], 0.0625);
  EXPECT_THROW(dyadic_radii(0.5, 5, 1.0 / 32), ValidationError);
}

TEST(DecayScan, SmoothInteriorIsCubic) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 32);
  const auto u = make_field([](const Vec3& x) { return Vec3(std::cos(2 * x.x()), std::sin(2 * x.x()), 0); },
                            d.mesh());
  const auto p = decay_scan(u, d.mesh(), {Vec3(0, 0, -0.5)}, 0.5, 4);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p[0].exponent, 3.0, 0.2);
  EXPECT_GT(p[0].smallness, 0.0);
  EXPECT_LT(p[0].smallness, 1.0);
}

TEST(DetectSingular, ConstantFieldIsEmpty) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 16);
  const auto u = make_field([](const Vec3&) { return Vec3::UnitX(); }, d.mesh());
  const auto s = detect_singular(u, d.mesh(), 0.1, 0.125, 0.5);
  EXPECT_TRUE(s.flagged.empty());
  EXPECT_EQ(s.tested, d.mesh().count(NodeTag::Graph));
}

TEST(DetectSingular, ExplicitVortexIsFlagged) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 16);
  const Vec2 c(0.03125, 0.03125);
  const auto u = make_field(
      [&](const Vec3& x) {
        const Vec2 v = vortex_field(x.head<2>() - c, 1);
        return Vec3(v.x(), v.y(), 0);
      },
      d.mesh());
  const double eps0 = 0.3 * vortex_reference_energy(d.mesh(), Vec3(c.x(), c.y(), 0), 0.5);
  const auto s = detect_singular(u, d.mesh(), eps0, 0.125, 0.5);
  ASSERT_FALSE(s.flagged.empty());
  for (const auto& f : s.flagged) EXPECT_LE((f.position.head<2>() - c).norm(), 0.25);
}

TEST(VortexReference, ScalesLikeConstant) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 32);
  const Vec3 c(0.015625, 0.015625, 0);
  const double a = vortex_reference_energy(d.mesh(), c, 0.5);
  const double b = vortex_reference_energy(d.mesh(), c, 0.25);
  EXPECT_GT(a, 0.0);
  // |grad|^2 = 1/rho^2 gives E_r ~ log(r / h) scale, so it shrinks slowly
  EXPECT_LT(b, a);
  EXPECT_GT(b, 0.5 * a);
}
