#include "harmap/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace harmap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("harmap_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(FormatNumber, RoundTrips) {
  for (double x : {0.1, -18.666666666666668, 1e-300, 3.0, 6.283185307179586}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(3.0), "3");
}

TEST(FieldCsv, RoundTrip) {
  const auto dir = scratch("field");
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  const auto u = make_field([](const Vec3& x) { return Vec3(1.0 / 3.0 + x.x(), x.y(), 0.1); }, d.mesh());
  const auto path = (dir / "u.csv").string();
  write_field_csv(path, u, d.mesh());
  const auto t = read_field_csv(path);
  ASSERT_EQ(t.values.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(t.values[i], u.values[i]);
    EXPECT_EQ(t.points[i], d.mesh().points[i]);
  }
}

TEST(FieldCsv, BadInput) {
  const auto dir = scratch("bad");
  EXPECT_THROW(read_field_csv((dir / "missing.csv").string()), ValidationError);
  std::ofstream((dir / "h.csv").string()) << "a,b,c\n";
  EXPECT_THROW(read_field_csv((dir / "h.csv").string()), ValidationError);
  std::ofstream((dir / "n.csv").string()) << "node,x,y,z,u1,u2,u3\n0,1,2,3,x,0,0\n";
  EXPECT_THROW(read_field_csv((dir / "n.csv").string()), ValidationError);
}

TEST(Json, BoundReport) {
  BoundReport r;
  r.name = "demo";
  r.add(0.5, 1.0, "here");
  r.extra["k"] = 2.0;
  const json j = r;
  EXPECT_EQ(j["name"], "demo");
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["extra"]["k"], 2.0);
  EXPECT_EQ(j["worst"], "here");
}

TEST(Json, DomainSpec) {
  const auto s = domain_spec_from_json(json{{"kind", "paraboloid"}, {"params", {{"a", 0.4}}}, {"h", 0.0625}});
  EXPECT_EQ(s.kind, "paraboloid");
  EXPECT_EQ(s.h, 0.0625);
  const auto d = build_domain(s);
  ASSERT_TRUE(d.graph.has_value());
  EXPECT_NEAR(d.graph->graph().lip(), 0.4, 1e-12);
  EXPECT_EQ(to_json(s)["params"]["a"], 0.4);
  EXPECT_THROW(build_domain(domain_spec_from_json(json{{"kind", "cone"}})), ValidationError);
}

TEST(Json, BoxSpec) {
  const auto d = build_domain(domain_spec_from_json(
      json{{"kind", "box"}, {"params", {{"l", 1.0}, {"d", 1.0}, {"lateral_cells", 3}}}, {"h", 0.25}}));
  ASSERT_TRUE(d.box.has_value());
  EXPECT_EQ(d.box->lateral_cells(), 3);
}

TEST(Json, FileRoundTrip) {
  const auto dir = scratch("json");
  const json j = {{"a", 1.0 / 3.0}, {"b", {1, 2, 3}}};
  write_json((dir / "x.json").string(), j);
  EXPECT_EQ(read_json((dir / "x.json").string()), j);
  std::ofstream((dir / "bad.json").string()) << "{";
  EXPECT_THROW(read_json((dir / "bad.json").string()), ValidationError);
}

TEST(Vtk, Layout) {
  const auto dir = scratch("vtk");
  auto d = build_graph_domain(make_graph_fn(GraphKind::Flat), 0.125);
  const auto u = make_field([](const Vec3&) { return Vec3::UnitX(); }, d.mesh());
  std::vector<double> s(d.mesh().size(), 1.5);
  write_vtk((dir / "f.vtk").string(), d.mesh(), {{"u", &u.values}}, {{"density", &s}});
  const auto text = slurp(dir / "f.vtk");
  EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0", 0), 0u);
  EXPECT_NE(text.find("POINTS " + std::to_string(d.mesh().size()) + " double"), std::string::npos);
  EXPECT_NE(text.find("VECTORS u double"), std::string::npos);
  EXPECT_NE(text.find("SCALARS density double 1"), std::string::npos);
  std::vector<double> shortv(3);
  EXPECT_THROW(write_vtk((dir / "g.vtk").string(), d.mesh(), {}, {{"x", &shortv}}), ValidationError);
}

TEST(Csv, TraceAndDecay) {
  const auto dir = scratch("csv");
  MinimizeTrace t;
  t.rows.push_back(TraceRow{0, 1.5, 0.25, 0.0, 0, 0.0, 0.0});
  write_trace_csv((dir / "t.csv").string(), t);
  EXPECT_EQ(slurp(dir / "t.csv"), "iter,energy,grad_norm,step,backtracks,tangency,unit\n0,1.5,0.25,0,0,0,0\n");
  DecayProfile p;
  p.radii = {0.5};
  p.integrals = {0.25};
  p.values = {0.5};
  write_decay_csv((dir / "d.csv").string(), {p});
  EXPECT_NE(slurp(dir / "d.csv").find("0,0,0,0.5,0.25,0.5,0,0"), std::string::npos);
}
