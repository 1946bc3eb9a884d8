#include "harmap/constructions.hpp"
#include "harmap/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace harmap;

namespace {

GraphDomain paraboloid_domain(double a, double h) {
  GraphParams p;
  p.scalars["a"] = a;
  return build_graph_domain(make_graph_fn(GraphKind::Paraboloid, p), h);
}

SphereField random_admissible(const Mesh& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  SphereField u;
  for (NodeIndex v = 0; v < m.size(); ++v) {
    Vec3 x(N(rng), N(rng), N(rng));
    const NodeIndex si = m.graph_surface_index[v];
    if (si != kNoNode) x -= x.dot(m.surface[si].normal) * m.surface[si].normal;
    u.values.push_back(x);
  }
  return renormalize(u);
}

PointMap planar(double a, double b) {
  return [=](const Vec3& x) {
    const double t = a * x.x() + b * x.y();
    return Vec3(std::cos(t), std::sin(t), 0);
  };
}

void expect_contract(const MinimizeTrace& t) {
  ASSERT_FALSE(t.rows.empty());
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    EXPECT_LE(t.rows[i].energy, t.rows[i - 1].energy) << "iter " << t.rows[i].iter;
  for (const auto& r : t.rows) {
    EXPECT_LE(r.tangency, 1e-10);
    EXPECT_LE(r.unit, 1e-10);
  }
}

}  // namespace

TEST(BoundaryModeNames, RoundTrip) {
  EXPECT_EQ(boundary_mode_from_string(to_string(BoundaryMode::FixedTrace)), BoundaryMode::FixedTrace);
  EXPECT_EQ(boundary_mode_from_string("tangential"), BoundaryMode::Tangential);
  EXPECT_THROW(boundary_mode_from_string("free"), ValidationError);
}

TEST(MinimizeOptions, Validation) {
  MinimizeOptions o;
  o.backtrack = 1.5;
  EXPECT_THROW(o.validate(), ValidationError);
  o = {};
  o.max_iters = -1;
  EXPECT_THROW(o.validate(), ValidationError);
}

TEST(ExtendTrace, ColumnsCopyTheirTop) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  const Mesh& m = d.mesh();
  const auto tr = planar(1.0, 2.0);
  const auto u = extend_trace(m, tr, BoundaryMode::FixedTrace);
  for (NodeIndex v = 0; v < m.size(); ++v) {
    const std::size_t c = m.column_of_node[v];
    const Vec3 want = m.tags[v] == NodeTag::Fixed ? tr(m.points[v])
                                                  : tr(m.points[m.column_start[c + 1] - 1]);
    EXPECT_LE((u.values[v] - want).norm(), 1e-15);
  }
}

TEST(ExtendTrace, TangentialProjection) {
  auto d = paraboloid_domain(0.4, 0.125);
  const auto u = extend_trace(d.mesh(), planar(1.0, 0.0), BoundaryMode::Tangential);
  EXPECT_LE(tangency_violation(u, d.mesh()).max_violation, 1e-15);
  EXPECT_LE(unit_violation(u), 1e-15);
}

TEST(Minimize, RandomInitMonotone) {
  auto d = paraboloid_domain(0.4, 0.125);
  MinimizeOptions o;
  o.max_iters = 200;
  const auto r = minimize_G(d.mesh(), random_admissible(d.mesh(), 9), EnergyParams{1.0, 1.0}, o);
  expect_contract(r.trace);
  EXPECT_LT(r.trace.rows.back().energy, r.trace.rows.front().energy);
}

TEST(Minimize, FixedTraceKeepsBoundary) {
  auto d = paraboloid_domain(0.4, 0.125);
  const Mesh& m = d.mesh();
  MinimizeOptions o;
  o.boundary_mode = BoundaryMode::FixedTrace;
  o.max_iters = 100;
  const auto init = renormalize(random_admissible(m, 4));
  const auto r = minimize_G(m, init, EnergyParams{}, o);
  for (NodeIndex v = 0; v < m.size(); ++v)
    if (m.tags[v] != NodeTag::Interior) {
      EXPECT_LE((r.field.values[v] - init.values[v]).norm(), 1e-15);
    }
}

TEST(Minimize, FixedPointStopsQuickly) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  MinimizeOptions o;
  o.boundary_mode = BoundaryMode::FixedTrace;
  const auto init = extend_trace(d.mesh(), planar(1.0, 0.5), o.boundary_mode);
  const auto first = minimize_G(d.mesh(), init, EnergyParams{}, o);
  ASSERT_TRUE(first.trace.converged);
  const auto again = minimize_G(d.mesh(), first.field, EnergyParams{}, o);
  EXPECT_LE(again.trace.rows.size(), 3u);
  const double e0 = first.trace.rows.back().energy;
  EXPECT_LE(std::abs(again.trace.rows.back().energy - e0), o.energy_tol * std::max(1.0, std::abs(e0)));
}

TEST(Minimize, MatchesStricterOracle) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 16);
  MinimizeOptions o;
  o.boundary_mode = BoundaryMode::FixedTrace;
  o.grad_tol = 1e-4;
  o.energy_tol = 1e-8;
  const auto init = extend_trace(d.mesh(), planar(2.0, 1.0), o.boundary_mode);
  const auto r = minimize_G(d.mesh(), init, EnergyParams{}, o);
  MinimizeOptions strict = o;
  strict.grad_tol = 1e-5;
  strict.energy_tol = 1e-9;
  const auto ref = minimize_G(d.mesh(), init, EnergyParams{}, strict);
  const double e = r.trace.rows.back().energy, eref = ref.trace.rows.back().energy;
  EXPECT_LE(std::abs(e - eref), 0.02 * std::abs(eref));
  EXPECT_LE(eref, e + 1e-12);
}

TEST(Minimize, MaxItersIsNotAnError) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  MinimizeOptions o;
  o.max_iters = 3;
  const auto r = minimize_G(d.mesh(), random_admissible(d.mesh(), 2), EnergyParams{}, o);
  EXPECT_FALSE(r.trace.converged);
  EXPECT_EQ(r.trace.stop_reason, "max_iters");
  EXPECT_EQ(r.trace.rows.size(), 4u);
}

TEST(Minimize, TangentialNeedsTangentialInit) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  const auto north = make_field([](const Vec3&) { return Vec3::UnitZ(); }, d.mesh());
  EXPECT_THROW(minimize_G(d.mesh(), north, EnergyParams{}, MinimizeOptions{}), ValidationError);
}

TEST(Minimize, SizeMismatch) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  SphereField u;
  u.values = {Vec3::UnitX()};
  EXPECT_THROW(minimize_G(d.mesh(), u, EnergyParams{}, MinimizeOptions{}), ValidationError);
}

TEST(ElResidual, ConstantIsZero) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  const auto u = make_field([](const Vec3&) { return Vec3::UnitX(); }, d.mesh());
  const auto r = el_residual(u, d.mesh());
  EXPECT_EQ(r.interior_l2, 0.0);
  EXPECT_GT(r.interior_nodes, 0u);
  EXPECT_EQ(r.histogram.size(), 20u);
}

TEST(ElResidual, EquatorSecondOrder) {
  const double a = std::numbers::pi;
  std::vector<double> res;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), h);
    const auto u = make_field([&](const Vec3& x) { return Vec3(std::cos(a * x.x()), std::sin(a * x.x()), 0); },
                              d.mesh());
    res.push_back(el_residual(u, d.mesh()).interior_l2);
  }
  EXPECT_GT(res[0] / res[1], 3.0);
  EXPECT_GT(res[1] / res[2], 3.0);
}

TEST(ElResidual, TangentialMinimizerHistogram) {
  auto d = paraboloid_domain(0.4, 0.125);
  const auto init = extend_trace(d.mesh(), planar(1.0, 0.5), BoundaryMode::Tangential);
  const auto r = minimize_G(d.mesh(), init, EnergyParams{1.0, 0.5}, MinimizeOptions{});
  const auto e = el_residual(r.field, d.mesh());
  EXPECT_LE(e.boundary_max_distance, 1e-8);
  EXPECT_EQ(e.histogram[9] + e.histogram[10], e.boundary_nodes);
}

TEST(GradientCheck, Flat) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 1.0 / 16);
  const auto g = gradient_check(d.mesh(), EnergyParams{}, 4, 25);
  EXPECT_EQ(g.comparisons, 100u);
  EXPECT_LE(g.max_relative_error, 1e-6);
}

TEST(GradientCheck, ParaboloidWithSurfaceTerm) {
  auto d = paraboloid_domain(0.4, 1.0 / 16);
  EXPECT_LE(gradient_check(d.mesh(), EnergyParams{1.0, 1.0}, 4, 25).max_relative_error, 1e-5);
}

TEST(GradientCheck, ZeroStep) {
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  EXPECT_THROW(gradient_check(d.mesh(), EnergyParams{}, 1, 1, 0.0), ValidationError);
}
